#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// None of these call into the code paths they are used to check.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracles {

/// Maximiser of a unimodal function on [lo, hi] by golden-section search.
inline double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double tol = 1e-10) {
  return golden_section_max([&](double x) { return -f(x); }, lo, hi, tol);
}

/// E[X^k] = 2^(k+n-1) / B(n/2, 1/2) * B((k+n)/2, n/2) * r^k, using std::lgamma.
inline double beta_raw_moment(int n, double r, int k) {
  auto lbeta = [](double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); };
  const double ln = (k + n - 1) * std::numbers::ln2 - lbeta(0.5 * n, 0.5) +
                    lbeta(0.5 * (k + n), 0.5 * n);
  return std::exp(ln) * std::pow(r, k);
}

/// Mean ratio C_n via std::lgamma.
inline double mean_ratio(int n) {
  return std::exp(n * std::numbers::ln2 + 2.0 * std::lgamma(0.5 * (n + 1)) -
                  0.5 * std::log(std::numbers::pi) - std::lgamma(n + 0.5));
}

/// Leading-order gap sqrt(2) - C_n. Var(X/r) = 2 - C_n^2 ~ 1/(2n) because
/// s = X^2/(4r^2) ~ Beta(n/2, n/2) has variance 1/(4(n+1)) and
/// Var X ~ (2r)^2 Var(s) / (4 E[s]) = r^2 / (2n); hence C_n ~ sqrt2 - 1/(4 sqrt2 n).
inline double gap_asymptotic(int n) { return 1.0 / (4.0 * std::numbers::sqrt2 * n); }

}  // namespace oracles
