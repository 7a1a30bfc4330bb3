#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "hyperchord/errors.hpp"
#include "hyperchord/specfun.hpp"

namespace hyperchord {

/// pi^(n/2) / Gamma(n/2 + 1)
inline double volume(int n) {
  detail::require(n >= 1, "volume: n must be at least 1");
  return std::exp(0.5 * n * std::log(std::numbers::pi) - ln_gamma(0.5 * n + 1.0));
}

/// Surface area of the unit n-sphere in R^(n+1): 2 pi^((n+1)/2) / Gamma((n+1)/2).
inline double surface_area(int n) {
  detail::require(n >= 1, "surface_area: n must be at least 1");
  return 2.0 * std::exp(0.5 * (n + 1) * std::log(std::numbers::pi) - ln_gamma(0.5 * (n + 1)));
}

struct SphereMetrics {
  int n;
  double volume;
  double surface_area;
};

inline SphereMetrics sphere_metrics(int n) { return {n, volume(n), surface_area(n)}; }

enum class SphereMetric { volume, surface_area };

inline std::string_view to_string(SphereMetric m) {
  return m == SphereMetric::volume ? "volume" : "surface_area";
}

struct ArgmaxResult {
  int argmax;
  std::vector<SphereMetrics> table;
};

/// Integer maximiser of the chosen metric over [n_lo, n_hi], with the table.
inline ArgmaxResult argmax_over(int n_lo, int n_hi, SphereMetric metric) {
  detail::require(n_lo >= 1 && n_lo <= n_hi, "argmax_over: need 1 <= n_lo <= n_hi");
  ArgmaxResult out{n_lo, {}};
  double best = -1.0;
  for (int n = n_lo; n <= n_hi; ++n) {
    out.table.push_back(sphere_metrics(n));
    const auto& row = out.table.back();
    const double v = metric == SphereMetric::volume ? row.volume : row.surface_area;
    if (v > best) {
      best = v;
      out.argmax = n;
    }
  }
  return out;
}

}  // namespace hyperchord
