#pragma once

// Chord-length samplers and the goodness-of-fit machinery used to check them
// against each other and against the analytic distribution function.
//
// geometric       two uniform points on the sphere, Euclidean distance
// beta_transform  X = 2r sqrt(B), B = G1/(G1+G2), G1,G2 ~ Gamma(n/2)
// inverse_cdf     X = quantile(U)
// angular         first point at the pole; polar angle of the second from
//                 cos(theta) = g / sqrt(g^2 + chi2_n), X = 2r sin(theta/2)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hyperchord/chord.hpp"
#include "hyperchord/errors.hpp"
#include "hyperchord/rng.hpp"
#include "hyperchord/specfun.hpp"

namespace hyperchord {

enum class SamplerKind { geometric, beta_transform, inverse_cdf, angular };

inline constexpr std::string_view to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::geometric: return "geometric";
    case SamplerKind::beta_transform: return "beta_transform";
    case SamplerKind::inverse_cdf: return "inverse_cdf";
    case SamplerKind::angular: return "angular";
  }
  return "unknown";
}

inline std::optional<SamplerKind> parse_sampler_kind(std::string_view name) {
  for (auto k : {SamplerKind::geometric, SamplerKind::beta_transform, SamplerKind::inverse_cdf,
                 SamplerKind::angular})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

struct SampleBatch {
  int n = 2;
  double r = 1.0;
  SamplerKind sampler = SamplerKind::geometric;
  RngState seed;
  std::vector<double> values;
};

/// Uniform point on the sphere of radius r in R^(n+1).
inline std::vector<double> sample_sphere_point(int n, double r, RandomSource& rng) {
  detail::require(n >= 1, "sample_sphere_point: n must be at least 1");
  detail::require(r > 0.0, "sample_sphere_point: r must be positive");
  std::vector<double> p(static_cast<std::size_t>(n) + 1);
  double norm2 = 0.0;
  while (norm2 == 0.0) {
    norm2 = 0.0;
    for (auto& c : p) {
      c = rng.normal();
      norm2 += c * c;
    }
  }
  const double scale = r / std::sqrt(norm2);
  for (auto& c : p) c *= scale;
  return p;
}

namespace detail {

inline void check_sampler_args(int n, double r) {
  require(n >= 2, "sampler: n must be at least 2");
  require(r > 0.0 && std::isfinite(r), "sampler: r must be positive");
}

template <class Draw>
SampleBatch fill_batch(int n, double r, std::size_t count, RngState state, SamplerKind kind,
                       Draw&& draw) {
  SampleBatch batch{n, r, kind, state, {}};
  batch.values.reserve(count);
  RandomSource rng(state);
  const double top = 2.0 * r;
  while (batch.values.size() < count) {
    const double x = draw(rng);
    // Values on the closed boundary have probability zero; redraw them.
    if (x > 0.0 && x < top) batch.values.push_back(x);
  }
  return batch;
}

}  // namespace detail

inline SampleBatch sample_chords_geometric(int n, double r, std::size_t count, RngState state) {
  detail::check_sampler_args(n, r);
  return detail::fill_batch(n, r, count, state, SamplerKind::geometric, [&](RandomSource& rng) {
    const auto p = sample_sphere_point(n, r, rng);
    const auto q = sample_sphere_point(n, r, rng);
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d2 += (p[i] - q[i]) * (p[i] - q[i]);
    return std::sqrt(d2);
  });
}

inline SampleBatch sample_chords_beta_transform(int n, double r, std::size_t count,
                                                RngState state) {
  detail::check_sampler_args(n, r);
  const double shape = 0.5 * n;
  return detail::fill_batch(n, r, count, state, SamplerKind::beta_transform,
                            [&](RandomSource& rng) {
                              const double g1 = rng.gamma(shape);
                              const double g2 = rng.gamma(shape);
                              return 2.0 * r * std::sqrt(g1 / (g1 + g2));
                            });
}

inline SampleBatch sample_chords_inverse_cdf(int n, double r, std::size_t count, RngState state) {
  detail::check_sampler_args(n, r);
  const ChordDistribution dist(n, r);
  return detail::fill_batch(n, r, count, state, SamplerKind::inverse_cdf,
                            [&](RandomSource& rng) { return dist.quantile(rng.uniform()); });
}

inline SampleBatch sample_chords_angular(int n, double r, std::size_t count, RngState state) {
  detail::check_sampler_args(n, r);
  const double shape = 0.5 * n;
  return detail::fill_batch(n, r, count, state, SamplerKind::angular, [&](RandomSource& rng) {
    const double g = rng.normal();
    const double q = 2.0 * rng.gamma(shape);  // chi-square with n degrees of freedom
    const double len = std::sqrt(g * g + q);
    // 1 - cos(theta), rearranged to avoid cancellation when g > 0.
    const double one_minus_cos = g > 0.0 ? q / (len * (len + g)) : 1.0 - g / len;
    return r * std::sqrt(2.0 * one_minus_cos);
  });
}

inline SampleBatch sample_chords(SamplerKind kind, int n, double r, std::size_t count,
                                 RngState state) {
  switch (kind) {
    case SamplerKind::geometric: return sample_chords_geometric(n, r, count, state);
    case SamplerKind::beta_transform: return sample_chords_beta_transform(n, r, count, state);
    case SamplerKind::inverse_cdf: return sample_chords_inverse_cdf(n, r, count, state);
    case SamplerKind::angular: return sample_chords_angular(n, r, count, state);
  }
  throw domain_error("sample_chords: unknown sampler");
}

/// Normalising constant of the polar-angle density, Gamma((n+1)/2) / (sqrt(pi) Gamma(n/2)).
inline double angular_norm(int n) {
  detail::require(n >= 1, "angular_norm: n must be at least 1");
  return std::exp(ln_gamma(0.5 * (n + 1)) - 0.5 * std::log(std::numbers::pi) -
                  ln_gamma(0.5 * n));
}

/// Density of the angle between two uniform points on the n-sphere.
inline double angular_density(int n, double theta) {
  detail::require(theta >= 0.0 && theta <= std::numbers::pi,
                  "angular_density: theta must lie in [0, pi]");
  return angular_norm(n) * std::pow(std::sin(theta), n - 1);
}

// ---------------------------------------------------------------------------
// Summary statistics and Kolmogorov-Smirnov tests

struct BatchSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
  double median = 0.0;
};

inline BatchSummary summarize(std::span<const double> values) {
  BatchSummary s;
  s.count = values.size();
  if (values.empty()) return s;
  // Welford
  double m = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    ++k;
    const double delta = v - m;
    m += delta / static_cast<double>(k);
    m2 += delta * (v - m);
  }
  s.mean = m;
  s.variance = k > 1 ? m2 / static_cast<double>(k - 1) : 0.0;
  s.std_error = std::sqrt(s.variance / static_cast<double>(k));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

/// Asymptotic Kolmogorov coefficient for a 1% test.
inline constexpr double kKolmogorovCritical1Pct = 1.628;

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;  // 1% level
  double p_value = 1.0;
  bool passes = true;
};

/// Survival function of the Kolmogorov distribution with Stephens' small-sample correction.
inline double kolmogorov_p_value(double statistic, double effective_n) {
  const double root = std::sqrt(effective_n);
  const double lambda = (root + 0.12 + 0.11 / root) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

template <class Cdf>
KsResult ks_one_sample(std::span<const double> values, Cdf&& cdf) {
  detail::require(!values.empty(), "ks_one_sample: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  KsResult out;
  out.statistic = d;
  out.critical = kKolmogorovCritical1Pct / std::sqrt(n);
  out.p_value = kolmogorov_p_value(d, n);
  out.passes = d < out.critical;
  return out;
}

inline KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  detail::require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  KsResult out;
  out.statistic = d;
  out.critical = kKolmogorovCritical1Pct / std::sqrt(ne);
  out.p_value = kolmogorov_p_value(d, ne);
  out.passes = d < out.critical;
  return out;
}

}  // namespace hyperchord
