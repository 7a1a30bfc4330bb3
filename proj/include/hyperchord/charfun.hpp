#pragma once

// Characteristic function phi(t) = E[exp(i t X)] of the chord length.
//
// phi_numeric integrates exp(i t x) f(x) directly and is the reference. The
// closed forms exist for n = 2 (rational-exponential, no special functions)
// and n = 3 (Bessel J and Struve H). Both closed forms take a kernel policy
// so callers can observe which special functions an evaluation touches.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hyperchord/chord.hpp"
#include "hyperchord/errors.hpp"
#include "hyperchord/quadrature.hpp"
#include "hyperchord/specfun.hpp"

namespace hyperchord {

using ComplexValue = std::complex<double>;

/// Largest |t| r for which phi_numeric is supported.
inline constexpr double kMaxOscillation = 1e3;
/// Above this many radians across the support the integral is split at the
/// zero crossings of cos(t x).
inline constexpr double kSplitPhase = 50.0;
/// |r t| below which the n = 3 closed form switches to its Taylor series.
inline constexpr double kSmallArgumentN3 = 1e-4;
/// |r t| below which the n = 2 closed form switches to its Taylor series.
inline constexpr double kSmallArgumentN2 = 0.5;

struct StandardKernels {
  double bessel_j(int k, double z) const { return hyperchord::bessel_j(k, z); }
  double struve_h(int k, double z) const { return hyperchord::struve_h(k, z); }
};

inline QuadratureResult<ComplexValue> phi_numeric(const ChordDistribution& dist, double t,
                                                  const QuadratureSpec& spec = {}) {
  const double top = dist.support_max();
  if (std::abs(t) * dist.r() > kMaxOscillation)
    throw convergence_error("phi_numeric: |t| r above 1e3 is outside the supported range",
                            std::nan(""));
  if (t == 0.0) return {ComplexValue(1.0, 0.0), 0.0, 0, true};
  std::vector<double> points{0.0};
  if (std::abs(t) * top > kSplitPhase) {
    const double period = std::numbers::pi / std::abs(t);
    for (double x = 0.5 * period; x < top; x += period) points.push_back(x);
  }
  points.push_back(top);
  auto integrand = [&](double x, double, double gap) {
    const double lp = dist.log_pdf_split(x, gap);
    if (!std::isfinite(lp)) return ComplexValue{};
    return std::polar(std::exp(lp), t * x);
  };
  return integrate(integrand, std::span<const double>(points), spec);
}

/// phi(t) = (-1 + e^{2irt}(1 - 2irt)) / (2 r^2 t^2). Near t = 0 the numerator
/// cancels to O((rt)^2), so the moment series sum_k (i w)^k 2 / ((k+2) k!)
/// with w = 2rt is used instead.
template <class Kernels = StandardKernels>
ComplexValue phi_closed_n2(double r, double t, const Kernels& = {}) {
  detail::require(r > 0.0, "phi_closed_n2: r must be positive");
  const double w = 2.0 * r * t;
  if (std::abs(r * t) < kSmallArgumentN2) {
    ComplexValue sum{};
    ComplexValue power(1.0, 0.0);  // (i w)^k / k!
    for (int k = 0; k < 40; ++k) {
      const ComplexValue term = power * (2.0 / (k + 2.0));
      sum += term;
      if (std::abs(term) < 1e-18) break;
      power *= ComplexValue(0.0, w) / static_cast<double>(k + 1);
    }
    return sum;
  }
  const ComplexValue iw(0.0, w);
  return 2.0 * (-1.0 + std::exp(iw) * (1.0 - iw)) / (w * w);
}

struct PhiN3Terms {
  ComplexValue linear;  // 32 i r t / (15 pi)
  ComplexValue bessel;  // 2/(r t)^2 [J2(2rt) - 2rt J3(2rt)]
  ComplexValue struve;  // 2i/(r t)^2 [H2(2rt) - 2rt H3(2rt)]

  ComplexValue sum() const { return linear + bessel + struve; }
};

/// The three additive pieces of the n = 3 closed form, t != 0.
template <class Kernels = StandardKernels>
PhiN3Terms phi_closed_n3_terms(double r, double t, const Kernels& kernels = {}) {
  detail::require(r > 0.0, "phi_closed_n3: r must be positive");
  detail::require(t != 0.0, "phi_closed_n3_terms: t must be non-zero");
  const double w = 2.0 * r * t;
  detail::require(std::abs(w) <= kMaxStruveArgument,
                  "phi_closed_n3: |2rt| exceeds the Struve kernel range");
  const double scale = 2.0 / (r * r * t * t);
  PhiN3Terms terms;
  terms.linear = ComplexValue(0.0, 32.0 * r * t / (15.0 * std::numbers::pi));
  terms.bessel = scale * (kernels.bessel_j(2, w) - w * kernels.bessel_j(3, w));
  terms.struve = ComplexValue(0.0, scale * (kernels.struve_h(2, w) - w * kernels.struve_h(3, w)));
  return terms;
}

/// n = 3 closed form; Taylor series in the moments of X/(2r) for |rt| < 1e-4.
template <class Kernels = StandardKernels>
ComplexValue phi_closed_n3(double r, double t, const Kernels& kernels = {}) {
  detail::require(r > 0.0, "phi_closed_n3: r must be positive");
  if (std::abs(r * t) < kSmallArgumentN3) {
    // E[(X/2r)^k] = B(3/2 + k/2, 3/2) / B(3/2, 3/2)
    const double w = 2.0 * r * t;
    ComplexValue sum{};
    ComplexValue power(1.0, 0.0);
    for (int k = 0; k <= 6; ++k) {
      const double moment = std::exp(ln_beta(1.5 + 0.5 * k, 1.5) - ln_beta(1.5, 1.5));
      sum += power * moment;
      power *= ComplexValue(0.0, w) / static_cast<double>(k + 1);
    }
    return sum;
  }
  return phi_closed_n3_terms(r, t, kernels).sum();
}

}  // namespace hyperchord
