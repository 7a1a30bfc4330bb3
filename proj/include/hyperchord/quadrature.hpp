#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature.
//
// Every segment [lo, hi] is first mapped onto u in [0, 1] through the cubic
// smoothstep x = lo + (hi - lo) (3u^2 - 2u^3). The Jacobian 6u(1-u) vanishes
// at both ends, which turns algebraic endpoint behaviour (x - lo)^a into
// u^(2a+1); an inverse square root becomes bounded and a square root becomes
// quadratic. Interior nodes are then refined by bisecting the interval with
// the largest error estimate until the global tolerance is met.
//
// Integrands may take either f(x) or f(x, from_lo, to_hi). The three-argument
// form receives the distances to both segment ends computed without the
// cancellation of hi - x, for integrands whose singular factor depends on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "hyperchord/errors.hpp"

namespace hyperchord {

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;

  void validate() const {
    detail::require(abs_tol > 0.0, "QuadratureSpec: abs_tol must be positive");
    detail::require(rel_tol > 0.0, "QuadratureSpec: rel_tol must be positive");
    detail::require(max_subdivisions >= 1,
                    "QuadratureSpec: max_subdivisions must be at least 1");
  }
};

template <class V>
struct QuadratureResult {
  V value{};
  double error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

template <class V>
concept QuadratureValue =
    std::same_as<V, double> || std::same_as<V, std::complex<double>>;

namespace detail {

// Kronrod abscissae on [0, 1] in decreasing order; odd indices are the
// embedded 10-point Gauss nodes.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};

inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452254, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double real_part(double v) { return v; }
inline double real_part(const std::complex<double>& v) { return v.real(); }
inline double imag_part(double) { return 0.0; }
inline double imag_part(const std::complex<double>& v) { return v.imag(); }

// QUADPACK-style error heuristic for one real component of a 21-point rule.
inline double kronrod_error(std::span<const double, 21> fv, double half_width,
                            double kronrod, double gauss) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double mean = kronrod / (2.0 * half_width);
  double resabs = kKronrodWeights[10] * std::abs(fv[20]);
  double resasc = kKronrodWeights[10] * std::abs(fv[20] - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    resabs += kKronrodWeights[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    resasc += kKronrodWeights[j] *
              (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
  }
  resabs *= std::abs(half_width);
  resasc *= std::abs(half_width);
  double err = std::abs(kronrod - gauss);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return err;
}

struct Segment {
  double lo;
  double length;
};

template <class F>
auto evaluate_at(F& f, const Segment& seg, double u) {
  // Smoothstep is symmetric: 1 - p(u) = p(1 - u). Measure from the nearer end.
  const double v = 1.0 - u;
  const double jac = 6.0 * u * v * seg.length;
  double from_lo;
  double to_hi;
  if (u <= 0.5) {
    from_lo = seg.length * u * u * (3.0 - 2.0 * u);
    to_hi = seg.length - from_lo;
  } else {
    to_hi = seg.length * v * v * (3.0 - 2.0 * v);
    from_lo = seg.length - to_hi;
  }
  const double x = u <= 0.5 ? seg.lo + from_lo : (seg.lo + seg.length) - to_hi;
  if constexpr (std::is_invocable_v<F&, double, double, double>) {
    return f(x, from_lo, to_hi) * jac;
  } else {
    return f(x) * jac;
  }
}

template <class V>
struct Panel {
  std::size_t segment;
  double ua;
  double ub;
  V value;
  double error;
};

template <class V, class F>
Panel<V> apply_rule(F& f, const Segment& seg, std::size_t index, double ua,
                    double ub) {
  const double center = 0.5 * (ua + ub);
  const double half = 0.5 * (ub - ua);
  std::array<V, 21> fv{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    fv[2 * j] = evaluate_at(f, seg, center - dx);
    fv[2 * j + 1] = evaluate_at(f, seg, center + dx);
  }
  fv[20] = evaluate_at(f, seg, center);

  V kronrod = kKronrodWeights[10] * fv[20];
  V gauss{};
  for (std::size_t j = 0; j < 10; ++j) {
    kronrod += kKronrodWeights[j] * (fv[2 * j] + fv[2 * j + 1]);
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (fv[2 * j] + fv[2 * j + 1]);
  }
  kronrod *= half;
  gauss *= half;

  std::array<double, 21> comp{};
  for (std::size_t j = 0; j < 21; ++j) comp[j] = real_part(fv[j]);
  double err = kronrod_error(comp, half, real_part(kronrod), real_part(gauss));
  if constexpr (std::same_as<V, std::complex<double>>) {
    for (std::size_t j = 0; j < 21; ++j) comp[j] = imag_part(fv[j]);
    err += kronrod_error(comp, half, imag_part(kronrod), imag_part(gauss));
  }
  return {index, ua, ub, kronrod, err};
}

}  // namespace detail

/// Integrates f over consecutive segments [points[i], points[i+1]].
/// Breakpoints let the caller separate oscillation lobes or kinks.
template <class F>
auto integrate(F&& f, std::span<const double> points,
               const QuadratureSpec& spec = {}) {
  using V = std::decay_t<decltype(detail::evaluate_at(f, detail::Segment{}, 0.5))>;
  static_assert(QuadratureValue<V>, "integrand must return double or complex<double>");
  spec.validate();
  detail::require(points.size() >= 2, "integrate: need at least two points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    detail::require(points[i] < points[i + 1] && std::isfinite(points[i]) &&
                        std::isfinite(points[i + 1]),
                    "integrate: points must be finite and strictly increasing");

  std::vector<detail::Segment> segments;
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    segments.push_back({points[i], points[i + 1] - points[i]});

  using Panel = detail::Panel<V>;
  auto by_error = [](const Panel& a, const Panel& b) { return a.error < b.error; };
  std::vector<Panel> heap;
  V total{};
  double total_err = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    heap.push_back(detail::apply_rule<V>(f, segments[s], s, 0.0, 1.0));
    total += heap.back().value;
    total_err += heap.back().error;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  QuadratureResult<V> result;
  auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  while (total_err > tolerance() && result.subdivisions < spec.max_subdivisions) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    Panel worst = heap.back();
    const double mid = 0.5 * (worst.ua + worst.ub);
    if (!(worst.ua < mid && mid < worst.ub)) {
      // Interval exhausted at machine resolution; the tolerance is out of reach.
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    heap.pop_back();
    const auto& seg = segments[worst.segment];
    Panel left = detail::apply_rule<V>(f, seg, worst.segment, worst.ua, mid);
    Panel right = detail::apply_rule<V>(f, seg, worst.segment, mid, worst.ub);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    ++result.subdivisions;
  }

  // Re-sum from the panels so the running update does not accumulate drift.
  std::sort(heap.begin(), heap.end(), [](const Panel& a, const Panel& b) {
    return std::abs(a.value) < std::abs(b.value);
  });
  total = V{};
  total_err = 0.0;
  for (const auto& p : heap) {
    total += p.value;
    total_err += p.error;
  }
  result.value = total;
  result.error = total_err;
  result.converged = total_err <= tolerance();
  return result;
}

template <class F>
auto integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
  const std::array<double, 2> points = {lo, hi};
  return integrate(std::forward<F>(f), std::span<const double>(points), spec);
}

}  // namespace hyperchord
