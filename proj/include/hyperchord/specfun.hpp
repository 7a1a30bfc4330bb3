#pragma once

// Special-function kernels: log-gamma, beta, the regularized incomplete beta
// and its inverse, integer-order Bessel J and Struve H.
//
// The small-argument power series for J_k and H_k are summed in long double.
// On x86-64 that is the 80-bit extended format, which leaves enough headroom
// for the cancellation the alternating series suffer near |z| = 20.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hyperchord/errors.hpp"
#include "hyperchord/quadrature.hpp"

namespace hyperchord {

inline constexpr int kMaxBesselOrder = 10;
inline constexpr double kMaxBesselArgument = 500.0;
inline constexpr double kMaxStruveArgument = 100.0;

/// log Gamma(x) for x > 0 (Lanczos, g = 7, nine coefficients).
namespace detail {

/// ln Gamma(1 + e) = -gamma e + sum_{k>=2} (-1)^k zeta(k) e^k / k, for |e| <= 0.2.
inline double ln_gamma_1p(double e) {
  static constexpr std::array<double, 25> zeta = {
      1.6449340668482264, 1.2020569031595943, 1.0823232337111382, 1.0369277551433699,
      1.0173430619844491, 1.0083492773819228, 1.0040773561979443, 1.0020083928260822,
      1.0009945751278181, 1.0004941886041195, 1.000246086553308,  1.0001227133475785,
      1.0000612481350587, 1.000030588236307,  1.0000152822594087, 1.0000076371976379,
      1.000003817293265,  1.0000019082127166, 1.0000009539620339, 1.0000004769329868,
      1.0000002384505027, 1.000000119219926,  1.0000000596081891, 1.0000000298035035,
      1.0000000149015548};
  constexpr double euler_gamma = 0.57721566490153286;
  double sum = 0.0;
  double power = -e;  // (-e)^k
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    power *= -e;
    sum += zeta[i] * power / static_cast<double>(i + 2);
  }
  return -euler_gamma * e + sum;
}

}  // namespace detail

/// Lanczos (g = 7, 9 terms); near the zeros at 1 and 2 a series in x - 1
/// keeps the relative error small.
inline double ln_gamma(double x) {
  detail::require(x > 0.0 && std::isfinite(x), "ln_gamma: x must be positive and finite");
  if (std::abs(x - 1.0) <= 0.2) return detail::ln_gamma_1p(x - 1.0);
  if (std::abs(x - 2.0) <= 0.2) return detail::ln_gamma_1p(x - 2.0) + std::log1p(x - 2.0);
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  const double y = x - 1.0;
  double series = c[0];
  for (int i = 1; i < 9; ++i) series += c[i] / (y + i);
  const double t = y + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (y + 0.5) * std::log(t) - t +
         std::log(series);
}

inline double ln_beta(double a, double b) {
  detail::require(a > 0.0 && b > 0.0, "beta: arguments must be positive");
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

inline double beta(double a, double b) { return std::exp(ln_beta(a, b)); }

namespace detail {

// Continued fraction for I_z(a, b), modified Lentz evaluation.
inline double inc_beta_fraction(double z, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 20000;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * z / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw convergence_error("reg_inc_beta: continued fraction did not converge", h);
}

// Log of the Beta(a, b) density at z.
inline double ln_beta_density(double z, double a, double b) {
  return (a - 1.0) * std::log(z) + (b - 1.0) * std::log1p(-z) - ln_beta(a, b);
}

// Acklam's rational approximation to the standard normal quantile, ~1e-9.
inline double normal_quantile(double p) {
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) return -normal_quantile(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

/// Regularized incomplete beta I_z(a, b).
inline double reg_inc_beta(double z, double a, double b) {
  detail::require(a > 0.0 && b > 0.0, "reg_inc_beta: a and b must be positive");
  detail::require(z >= 0.0 && z <= 1.0, "reg_inc_beta: z must lie in [0, 1]");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return 1.0;
  const double ln_front = a * std::log(z) + b * std::log1p(-z) - ln_beta(a, b);
  const double front = std::exp(ln_front);
  if (z < (a + 1.0) / (a + b + 2.0))
    return front * detail::inc_beta_fraction(z, a, b) / a;
  return 1.0 - front * detail::inc_beta_fraction(1.0 - z, b, a) / b;
}

/// Inverse of z -> I_z(a, b). Newton steps on the Beta density, safeguarded
/// by bisection on a bracket that shrinks every iteration.
inline double inv_reg_inc_beta(double p, double a, double b) {
  detail::require(a > 0.0 && b > 0.0, "inv_reg_inc_beta: a and b must be positive");
  detail::require(p >= 0.0 && p <= 1.0, "inv_reg_inc_beta: p must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  constexpr double tolerance = 1e-12;
  const double mean = a / (a + b);
  const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
  double lo = 0.0;
  double hi = 1.0;
  double z = mean + sd * detail::normal_quantile(p);
  if (!(z > 0.0 && z < 1.0)) z = mean;

  for (int iter = 0; iter < 300; ++iter) {
    const double f = reg_inc_beta(z, a, b) - p;
    if (f == 0.0) return z;
    if (f < 0.0) lo = z;
    else hi = z;
    const double density = std::exp(detail::ln_beta_density(z, a, b));
    double next = z - f / density;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - z);
    z = next;
    // Newton is quadratic here: once the step is this small the residual
    // error is far below it.
    if (step <= tolerance * z || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * z)
      return z;
  }
  throw convergence_error("inv_reg_inc_beta: iteration stalled", z);
}

namespace detail {

inline void check_order(int k) {
  require(k >= 0 && k <= kMaxBesselOrder, "order must lie in [0, 10]");
}

// Hankel asymptotic expansion; returns J_nu(z) for z > 0 large.
inline double bessel_j_asymptotic(int nu, double z) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double term = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    if (k > 0) term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * z);
    const double mag = std::abs(term);
    if (mag > previous) break;  // divergent tail
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    if (k % 2 == 0) p += sign * term;
    else q += sign * term;
    if (mag < 1e-18) break;
    previous = mag;
  }
  const double w = z - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * z)) * (p * std::cos(w) - q * std::sin(w));
}

inline double bessel_j_series(int k, double z) {
  using ld = long double;
  const ld h = static_cast<ld>(z) / 2;
  ld term = 1;
  for (int i = 1; i <= k; ++i) term *= h / i;
  ld sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -h * h / (static_cast<ld>(m) * (m + k));
    sum += term;
    if (m > h && std::abs(term) <= 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

inline double struve_h_series(int k, double z) {
  using ld = long double;
  const ld h = static_cast<ld>(z) / 2;
  // Gamma(3/2) Gamma(k + 3/2)
  ld gamma_k = std::sqrt(std::numbers::pi_v<ld>) / 2;
  for (int i = 0; i < k; ++i) gamma_k *= (i + 1.5L);
  ld term = std::pow(h, k + 1) / (std::sqrt(std::numbers::pi_v<ld>) / 2 * gamma_k);
  ld sum = term;
  for (int m = 0; m < 300; ++m) {
    term *= -h * h / ((m + 1.5L) * (m + k + 1.5L));
    sum += term;
    if (m > h && std::abs(term) <= 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// H_k(z) = 2 (z/2)^k / (sqrt(pi) Gamma(k + 1/2)) Int_0^{pi/2} sin(z cos t) sin^{2k} t dt,
// integrated with a composite 21-point Kronrod rule. Each panel spans less
// than half an oscillation, so the fixed rule is accurate to rounding.
inline double struve_h_integral(int k, double z) {
  const double upper = 0.5 * std::numbers::pi;
  const int panels = static_cast<int>(std::ceil(z / 2.0)) + 4;
  const double width = upper / panels;
  auto integrand = [&](double t) {
    return std::sin(z * std::cos(t)) * std::pow(std::sin(t), 2 * k);
  };
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double center = (p + 0.5) * width;
    const double half = 0.5 * width;
    double panel = kKronrodWeights[10] * integrand(center);
    for (std::size_t j = 0; j < 10; ++j) {
      const double dt = half * kKronrodNodes[j];
      panel += kKronrodWeights[j] * (integrand(center - dt) + integrand(center + dt));
    }
    sum += panel * half;
  }
  const double ln_front = k * std::log(0.5 * z) - 0.5 * std::log(std::numbers::pi) -
                          ln_gamma(k + 0.5);
  return 2.0 * std::exp(ln_front) * sum;
}

}  // namespace detail

/// Bessel function of the first kind J_k(z), integer k in [0, 10], |z| <= 500.
inline double bessel_j(int k, double z) {
  detail::check_order(k);
  detail::require(std::abs(z) <= kMaxBesselArgument, "bessel_j: |z| must not exceed 500");
  if (z < 0.0) return (k % 2 == 0 ? 1.0 : -1.0) * bessel_j(k, -z);
  if (z == 0.0) return k == 0 ? 1.0 : 0.0;
  if (z <= 20.0) return detail::bessel_j_series(k, z);
  // Forward recurrence is stable while k < z.
  double jm = detail::bessel_j_asymptotic(0, z);
  if (k == 0) return jm;
  double j = detail::bessel_j_asymptotic(1, z);
  for (int i = 1; i < k; ++i) {
    const double next = 2.0 * i / z * j - jm;
    jm = j;
    j = next;
  }
  return j;
}

/// Struve function H_k(z), integer k in [0, 10], |z| <= 100.
inline double struve_h(int k, double z) {
  detail::check_order(k);
  detail::require(std::abs(z) <= kMaxStruveArgument, "struve_h: |z| must not exceed 100");
  if (z < 0.0) return (k % 2 == 0 ? -1.0 : 1.0) * struve_h(k, -z);
  if (z == 0.0) return 0.0;
  if (z <= 20.0) return detail::struve_h_series(k, z);
  return detail::struve_h_integral(k, z);
}

}  // namespace hyperchord
