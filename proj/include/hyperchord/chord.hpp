#pragma once

// Distribution of the Euclidean distance between two independent uniform
// points on the n-sphere of radius r embedded in R^(n+1).
//
// With s = x^2 / (4 r^2) the chord length satisfies s ~ Beta(n/2, n/2), so
// every evaluation below reduces to Beta-function quantities in s.

#include <cmath>
#include <limits>
#include <numbers>

#include "hyperchord/errors.hpp"
#include "hyperchord/specfun.hpp"

namespace hyperchord {

/// Mean chord length on the unit n-sphere,
/// 2^n Gamma((n+1)/2)^2 / (sqrt(pi) Gamma(n + 1/2)). Tends to sqrt(2).
inline double c_n(int n) {
  detail::require(n >= 1, "c_n: n must be at least 1");
  const double ln_value = n * std::numbers::ln2 + 2.0 * ln_gamma(0.5 * (n + 1)) -
                          0.5 * std::log(std::numbers::pi) - ln_gamma(n + 0.5);
  return std::exp(ln_value);
}

struct ModeResult {
  double location;
  /// Set for n = 2, where the density increases up to the end of the support.
  bool at_boundary;
};

class ChordDistribution {
 public:
  ChordDistribution(int n, double r) : n_(n), r_(r) {
    detail::require(n >= 2, "ChordDistribution: n must be at least 2");
    detail::require(r > 0.0 && std::isfinite(r), "ChordDistribution: r must be positive");
    ln_norm_ = ln_beta(0.5 * n, 0.5);
  }

  int n() const noexcept { return n_; }
  double r() const noexcept { return r_; }
  double support_max() const noexcept { return 2.0 * r_; }

  double pdf(double x) const {
    if (x <= 0.0 || x > support_max()) return 0.0;
    if (x == support_max()) return n_ == 2 ? 1.0 / r_ : 0.0;
    // 4 s (1 - s) with 1 - s = (2r - x)(2r + x) / (4 r^2)
    const double u = x / r_;
    const double base = u * u * ((support_max() - x) * (support_max() + x) / (4.0 * r_ * r_));
    return x / (r_ * r_ * std::exp(ln_norm_)) * std::pow(base, 0.5 * (n_ - 2));
  }

  double log_pdf(double x) const {
    if (x <= 0.0 || x > support_max()) return -std::numeric_limits<double>::infinity();
    return log_pdf_split(x, support_max() - x);
  }

  /// log f(x) given gap = 2r - x supplied separately, so that points near the
  /// end of the support keep full relative precision in 1 - s.
  double log_pdf_split(double x, double gap) const {
    if (gap <= 0.0) {
      return n_ == 2 && gap == 0.0 ? -std::log(r_)
                                   : -std::numeric_limits<double>::infinity();
    }
    // x^2/r^2 - x^4/(4 r^4) = 4 s (1 - s),  1 - s = gap (2r + x) / (4 r^2)
    const double ln_4s = 2.0 * std::log(x / r_);
    const double ln_1ms = std::log(gap) + std::log(support_max() + x) - std::log(4.0 * r_ * r_);
    return std::log(x) - 2.0 * std::log(r_) - ln_norm_ + 0.5 * (n_ - 2) * (ln_4s + ln_1ms);
  }

  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= support_max()) return 1.0;
    const double half_n = 0.5 * n_;
    return reg_inc_beta(x * x / (4.0 * r_ * r_), half_n, half_n);
  }

  double quantile(double p) const {
    detail::require(p >= 0.0 && p <= 1.0, "quantile: p must lie in [0, 1]");
    const double half_n = 0.5 * n_;
    return support_max() * std::sqrt(inv_reg_inc_beta(p, half_n, half_n));
  }

  /// E[X^k]. Even orders are the exact rational product
  /// (2r)^k prod_{i<k/2} (n/2 + i)/(n + i); odd orders go through log-Beta.
  double raw_moment(int k) const {
    detail::require(k >= 0, "raw_moment: k must be non-negative");
    if (k == 0) return 1.0;
    const double half_n = 0.5 * n_;
    if (k % 2 == 0) {
      double ratio = 1.0;
      for (int i = 0; i < k / 2; ++i) ratio *= (half_n + i) / (n_ + i);
      return std::pow(support_max(), k) * ratio;
    }
    const double ln_ratio = ln_beta(half_n + 0.5 * k, half_n) - ln_beta(half_n, half_n);
    return std::pow(support_max(), k) * std::exp(ln_ratio);
  }

  double mean() const { return c_n(n_) * r_; }

  double variance() const {
    const double c = c_n(n_);
    return (2.0 - c * c) * r_ * r_;
  }

  double median() const { return std::numbers::sqrt2 * r_; }

  ModeResult mode() const {
    if (n_ == 2) return {support_max(), true};
    return {support_max() * std::sqrt((n_ - 1.0) / (2.0 * n_ - 3.0)), false};
  }

  /// d/dr log f(x) = (1/r) [-2 + (n - 2)(2s - 1)/(1 - s)],  s = x^2/(4r^2).
  double score(double x) const {
    detail::require(x > 0.0 && x < support_max(), "score: x must lie in (0, 2r)");
    return score_split(x, support_max() - x);
  }

  double score_split(double x, double gap) const {
    const double s = x * x / (4.0 * r_ * r_);
    const double one_minus_s = gap * (support_max() + x) / (4.0 * r_ * r_);
    return (-2.0 + (n_ - 2) * (2.0 * s - 1.0) / one_minus_s) / r_;
  }

 private:
  int n_;
  double r_;
  double ln_norm_;  // log B(n/2, 1/2)
};

}  // namespace hyperchord
