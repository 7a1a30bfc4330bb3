#pragma once

// Radius inference from chord lengths: Fisher information, the Cramer-Rao
// bound, the mean-based estimator r_hat = mean(X) / c_n, and the gap
// sqrt(2) - c_n that measures how far the mean sits from its limit.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperchord/chord.hpp"
#include "hyperchord/errors.hpp"
#include "hyperchord/quadrature.hpp"
#include "hyperchord/sampling.hpp"

namespace hyperchord {

/// I(r) = 4 n (n - 1) / ((n - 4) r^2). Only finite for n > 4.
inline double fisher_closed(int n, double r) {
  detail::require(n > 4, "fisher_closed: defined only for n > 4");
  detail::require(r > 0.0, "fisher_closed: r must be positive");
  return 4.0 * (n - 1.0) * n / ((n - 4.0) * r * r);
}

/// E[score^2] by quadrature over (0, 2r). For n = 3 and n = 4 the integral
/// diverges at x = 2r and the result comes back unconverged.
inline QuadratureResult<double> fisher_numeric(int n, double r, const QuadratureSpec& spec = {}) {
  const ChordDistribution dist(n, r);
  auto integrand = [&](double x, double, double gap) {
    const double lp = dist.log_pdf_split(x, gap);
    if (!std::isfinite(lp)) return 0.0;
    const double s = dist.score_split(x, gap);
    return s * s * std::exp(lp);
  };
  return integrate(integrand, 0.0, dist.support_max(), spec);
}

struct FisherArgmin {
  double continuous;                    // minimiser of n(n-1)/(n-4) over n > 4
  std::vector<int> integer_minimizers;  // ties included, ascending
  double integer_minimum;               // n(n-1)/(n-4) at the integer minimisers
};

/// d/dn [n(n-1)/(n-4)] = (n^2 - 8n + 4)/(n-4)^2, so the continuous minimiser
/// is the larger root 4 + 2 sqrt(3). Integers are compared exactly.
inline FisherArgmin fisher_argmin(int n_lo = 5, int n_hi = 30) {
  detail::require(n_lo > 4 && n_lo <= n_hi, "fisher_argmin: need 4 < n_lo <= n_hi");
  FisherArgmin out{4.0 + 2.0 * std::sqrt(3.0), {}, 0.0};
  // Compare num/den pairs by cross multiplication.
  std::int64_t best_num = 0;
  std::int64_t best_den = 0;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    const std::int64_t num = n * (n - 1);
    const std::int64_t den = n - 4;
    if (out.integer_minimizers.empty() || num * best_den < best_num * den) {
      out.integer_minimizers = {static_cast<int>(n)};
      best_num = num;
      best_den = den;
    } else if (num * best_den == best_num * den) {
      out.integer_minimizers.push_back(static_cast<int>(n));
    }
  }
  out.integer_minimum = static_cast<double>(best_num) / static_cast<double>(best_den);
  return out;
}

/// 1 / (m I(r)).
inline double crlb(int n, double r, std::int64_t sample_count) {
  detail::require(sample_count >= 1, "crlb: sample_count must be at least 1");
  return 1.0 / (static_cast<double>(sample_count) * fisher_closed(n, r));
}

/// Var(r_hat) = (2 - c_n^2) r^2 / (m c_n^2).
inline double estimator_variance_closed(int n, double r, std::int64_t sample_count) {
  detail::require(n >= 2, "estimator_variance_closed: n must be at least 2");
  detail::require(r > 0.0, "estimator_variance_closed: r must be positive");
  detail::require(sample_count >= 1, "estimator_variance_closed: sample_count must be at least 1");
  const double c = c_n(n);
  return (2.0 - c * c) * r * r / (static_cast<double>(sample_count) * c * c);
}

struct EstimationReport {
  int n = 0;
  std::optional<double> r_true;
  std::int64_t m = 0;
  double r_hat = 0.0;
  double var_closed_form = 0.0;
  std::optional<double> crlb;
  std::optional<double> efficiency;
  std::optional<double> empirical_var;
  /// Closed-form variance and bound evaluated at r_hat because r_true is unknown.
  bool plug_in = false;
  /// Empty when the bound is available; otherwise why it was omitted.
  std::string crlb_note;
};

/// r_hat = mean / c_n. Variance and bound use r_true when supplied (simulation
/// mode) and r_hat otherwise (plug-in mode, flagged). empirical_var is the
/// sample variance of the batch propagated through the estimator.
inline EstimationReport estimate_radius(const SampleBatch& batch,
                                        std::optional<double> r_true = std::nullopt) {
  detail::require(!batch.values.empty(), "estimate_radius: empty batch");
  detail::require(batch.n >= 2, "estimate_radius: n must be at least 2");
  const auto summary = summarize(batch.values);
  const double c = c_n(batch.n);
  EstimationReport rep;
  rep.n = batch.n;
  rep.r_true = r_true;
  rep.m = static_cast<std::int64_t>(batch.values.size());
  rep.r_hat = summary.mean / c;
  rep.plug_in = !r_true.has_value();
  const double r_eval = r_true.value_or(rep.r_hat);
  rep.var_closed_form = estimator_variance_closed(batch.n, r_eval, rep.m);
  if (batch.n > 4) {
    rep.crlb = crlb(batch.n, r_eval, rep.m);
    rep.efficiency = *rep.crlb / rep.var_closed_form;
  } else {
    rep.crlb_note = "CRLB unavailable: Fisher information is not finite for n <= 4";
  }
  if (rep.m > 1) rep.empirical_var = summary.variance / (static_cast<double>(rep.m) * c * c);
  return rep;
}

// ---------------------------------------------------------------------------
// Gap analysis

struct GapRow {
  int n;
  double c_n;
  double gap;  // sqrt(2) - c_n
};

inline GapRow gap_row(int n) {
  const double c = c_n(n);
  return {n, c, std::numbers::sqrt2 - c};
}

inline std::vector<GapRow> gap_table(int n_min, int n_max) {
  detail::require(n_min >= 2 && n_min <= n_max, "gap_table: need 2 <= n_min <= n_max");
  std::vector<GapRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  for (int n = n_min; n <= n_max; ++n) rows.push_back(gap_row(n));
  return rows;
}

/// Midway between gap(18) and gap(19): the smallest n below it is 19.
inline double default_saturation_epsilon() {
  return 0.5 * (gap_row(18).gap + gap_row(19).gap);
}

/// Smallest n in the table whose gap falls below epsilon.
inline std::optional<int> detect_saturation(std::span<const GapRow> table, double epsilon) {
  for (const auto& row : table)
    if (row.gap < epsilon) return row.n;
  return std::nullopt;
}

/// (median - mean)^2 / variance = (sqrt2 - c_n)^2 / (2 - c_n^2).
inline double median_deviation_ratio(int n) {
  const double c = c_n(n);
  const double d = std::numbers::sqrt2 - c;
  return d * d / (2.0 - c * c);
}

/// The same ratio after cancelling sqrt2 - c_n: (sqrt2 - c_n) / (sqrt2 + c_n).
inline double median_deviation_ratio_factored(int n) {
  const double c = c_n(n);
  return (std::numbers::sqrt2 - c) / (std::numbers::sqrt2 + c);
}

}  // namespace hyperchord
