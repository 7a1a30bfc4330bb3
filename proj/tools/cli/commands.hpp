#pragma once

// Command implementations. Each takes its parsed options and writes an
// OutputEnvelope to `out`; the return value is the process exit code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cli/envelope.hpp"
#include "hyperchord/hyperchord.hpp"
#include "hyperchord/io.hpp"

namespace hyperchord::cli {

/// Raised for bad flag values; mapped to exit code 2.
class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kGridTolerance = 1e-12;
/// Closed form vs quadrature disagreement that signals a bug.
inline constexpr double kCharfunOracleTolerance = 1e-6;

inline const char* kDimensionSevenNote =
    "a maximum at dimension 7 is sometimes quoted; the integer argmax of V_n is 5 and of the "
    "S^n surface area is 6; 7 is the ambient dimension of S^6 in R^7, where the surface area "
    "peaks";

struct Grid {
  double lo;
  double hi;
  double step;

  std::vector<double> points() const {
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + kGridTolerance)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
      double v = lo + static_cast<double>(i) * step;
      if (std::abs(v - hi) <= kGridTolerance * std::max(1.0, std::abs(hi))) v = hi;
      out.push_back(v);
    }
    return out;
  }

  std::string text() const {
    return format_double(lo) + ':' + format_double(hi) + ':' + format_double(step);
  }
};

/// "lo:hi:step", inclusive of hi within 1e-12.
inline Grid parse_grid(const std::string& spec) {
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (b == std::string::npos || spec.find(':', b + 1) != std::string::npos)
    throw usage_error("grid must be lo:hi:step, got '" + spec + "'");
  Grid g{};
  try {
    std::size_t used = 0;
    auto number = [&](const std::string& s) {
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    };
    g.lo = number(spec.substr(0, a));
    g.hi = number(spec.substr(a + 1, b - a - 1));
    g.step = number(spec.substr(b + 1));
  } catch (const std::exception&) {
    throw usage_error("grid must be lo:hi:step with numeric fields, got '" + spec + "'");
  }
  if (!(g.step > 0.0)) throw usage_error("grid step must be positive");
  if (g.hi < g.lo) throw usage_error("grid hi must not be below lo");
  if ((g.hi - g.lo) / g.step > 1e7) throw usage_error("grid has more than 1e7 points");
  return g;
}

struct IntRange {
  int lo;
  int hi;
};

/// "lo:hi" over integers, inclusive.
inline IntRange parse_range(const std::string& spec) {
  const auto a = spec.find(':');
  if (a == std::string::npos) throw usage_error("range must be lo:hi, got '" + spec + "'");
  IntRange r{};
  try {
    std::size_t used = 0;
    const std::string lo = spec.substr(0, a);
    const std::string hi = spec.substr(a + 1);
    r.lo = std::stoi(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(lo);
    r.hi = std::stoi(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(hi);
  } catch (const std::exception&) {
    throw usage_error("range must be lo:hi with integer fields, got '" + spec + "'");
  }
  if (r.hi < r.lo) throw usage_error("range is empty");
  return r;
}

struct CommonOptions {
  Format format = Format::csv;
  std::uint64_t seed = 0;
  bool timestamp = false;
};

inline OutputEnvelope make_envelope(const std::string& command, const CommonOptions& common) {
  OutputEnvelope env;
  env.command = command;
  env.provenance = make_provenance(common.seed, common.timestamp);
  return env;
}

// ---------------------------------------------------------------------------
// dist

struct DistOptions {
  int n = 3;
  double r = 1.0;
  std::string which = "pdf";
  std::optional<std::string> grid;
};

inline int cmd_dist(const DistOptions& o, const CommonOptions& common, std::ostream& out) {
  const ChordDistribution d(o.n, o.r);
  if (o.which != "pdf" && o.which != "cdf" && o.which != "quantile")
    throw usage_error("--which must be pdf, cdf or quantile");
  const bool quantile = o.which == "quantile";
  const Grid grid = o.grid ? parse_grid(*o.grid)
                           : quantile ? Grid{0.0, 1.0, 0.01} : Grid{0.0, d.support_max(), d.support_max() / 200};
  if (quantile && (grid.lo < 0.0 || grid.hi > 1.0))
    throw usage_error("quantile grid must lie in [0, 1]");

  auto env = make_envelope("dist", common);
  env.parameters["n"] = o.n;
  env.parameters["r"] = o.r;
  env.parameters["which"] = o.which;
  env.parameters["grid"] = grid.text();
  const auto mode = d.mode();
  env.summary["mean"] = d.mean();
  env.summary["variance"] = d.variance();
  env.summary["median"] = d.median();
  env.summary["mode"] = mode.location;
  env.summary["mode_at_boundary"] = mode.at_boundary;
  env.columns = {quantile ? "p" : "x", o.which};
  for (double v : grid.points()) {
    double y = 0.0;
    if (o.which == "pdf") y = d.pdf(v);
    else if (o.which == "cdf") y = d.cdf(v);
    else y = d.quantile(v);
    env.rows.push_back({v, y});
  }
  write_envelope(out, env, common.format);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// sample

struct SampleOptions {
  int n = 3;
  double r = 1.0;
  std::int64_t count = 1000;
  std::string sampler = "geometric";
  std::uint64_t stream = 0;
  std::optional<std::string> compare;
  std::optional<std::string> output;
};

inline SamplerKind sampler_or_throw(const std::string& name) {
  const auto kind = parse_sampler_kind(name);
  if (!kind)
    throw usage_error("unknown sampler '" + name +
                      "' (geometric, beta_transform, inverse_cdf, angular)");
  return *kind;
}

inline int cmd_sample(const SampleOptions& o, const CommonOptions& common, std::ostream& out) {
  if (o.count < 1) throw usage_error("--count must be at least 1");
  const SamplerKind kind = sampler_or_throw(o.sampler);
  const SamplerKind other = o.compare ? sampler_or_throw(*o.compare) : kind;
  const ChordDistribution d(o.n, o.r);
  const auto count = static_cast<std::size_t>(o.count);
  const auto batch = sample_chords(kind, o.n, o.r, count, {common.seed, o.stream});
  const auto s = summarize(batch.values);

  auto env = make_envelope("sample", common);
  env.parameters["n"] = o.n;
  env.parameters["r"] = o.r;
  env.parameters["count"] = o.count;
  env.parameters["sampler"] = o.sampler;
  env.parameters["stream_id"] = o.stream;
  if (o.compare) env.parameters["compare"] = *o.compare;
  env.summary["mean"] = s.mean;
  env.summary["std_error"] = s.std_error;
  env.summary["analytic_mean"] = d.mean();
  env.summary["mean_band_lo"] = d.mean() - 4.0 * s.std_error;
  env.summary["mean_band_hi"] = d.mean() + 4.0 * s.std_error;
  env.summary["variance"] = s.variance;
  env.summary["analytic_variance"] = d.variance();
  env.summary["median"] = s.median;
  env.summary["analytic_median"] = d.median();
  const auto ks = ks_one_sample(batch.values, [&](double x) { return d.cdf(x); });
  env.summary["ks_statistic"] = ks.statistic;
  env.summary["ks_p_value"] = ks.p_value;
  if (o.compare) {
    // Stream ids are offset so the comparison batch never shares draws.
    const auto ref = sample_chords(other, o.n, o.r, count, {common.seed, o.stream + (1ULL << 32)});
    const auto ks2 = ks_two_sample(batch.values, ref.values);
    env.summary["ks2_statistic"] = ks2.statistic;
    env.summary["ks2_p_value"] = ks2.p_value;
    env.summary["ks2_passes_1pct"] = ks2.passes;
  }
  if (o.output) {
    std::ofstream file(*o.output);
    if (!file) throw usage_error("cannot open output file '" + *o.output + "'");
    write_batch_csv(file, batch);
    env.parameters["output"] = *o.output;
  } else {
    env.columns = {"chord_length"};
    env.rows.reserve(batch.values.size());
    for (double v : batch.values) env.rows.push_back({v});
  }
  write_envelope(out, env, common.format);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateOptions {
  int n = 10;
  double r = 1.0;
  std::int64_t m = 1000;
  int replications = 10;
  std::string sampler = "beta_transform";
  unsigned threads = 0;  // 0: hardware concurrency
};

struct EstimateAggregate {
  double mean_r_hat;
  double bias;
  double bias_se;
  double empirical_var;    // mean of per-replication propagated sample variances
  double replication_var;  // variance of r_hat across replications
  double var_closed_form;
  std::optional<double> crlb;
  std::optional<double> efficiency;
};

/// Replication k uses stream_id k; aggregation runs in stream order.
inline std::vector<EstimationReport> run_replications(const EstimateOptions& o, std::uint64_t seed) {
  const SamplerKind kind = sampler_or_throw(o.sampler);
  std::vector<EstimationReport> reports(static_cast<std::size_t>(o.replications));
  unsigned workers = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(o.replications));
  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < reports.size(); k += workers) {
      const auto batch = sample_chords(kind, o.n, o.r, static_cast<std::size_t>(o.m), {seed, k});
      reports[k] = estimate_radius(batch, o.r);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  return reports;
}

inline EstimateAggregate aggregate(const EstimateOptions& o,
                                   const std::vector<EstimationReport>& reports) {
  std::vector<double> r_hats;
  double emp = 0.0;
  int emp_count = 0;
  for (const auto& rep : reports) {
    r_hats.push_back(rep.r_hat);
    if (rep.empirical_var) {
      emp += *rep.empirical_var;
      ++emp_count;
    }
  }
  const auto s = summarize(r_hats);
  EstimateAggregate a{};
  a.mean_r_hat = s.mean;
  a.bias = s.mean - o.r;
  a.empirical_var = emp_count ? emp / emp_count : std::nan("");
  a.bias_se = std::sqrt((emp_count ? a.empirical_var : s.variance) / static_cast<double>(reports.size()));
  a.replication_var = s.variance;
  a.var_closed_form = estimator_variance_closed(o.n, o.r, o.m);
  if (o.n > 4) {
    a.crlb = crlb(o.n, o.r, o.m);
    a.efficiency = *a.crlb / a.var_closed_form;
  }
  return a;
}

inline int cmd_estimate(const EstimateOptions& o, const CommonOptions& common, std::ostream& out) {
  if (o.m < 2) throw usage_error("--m must be at least 2");
  if (o.replications < 1) throw usage_error("--replications must be at least 1");
  if (!(o.r > 0.0)) throw usage_error("--r must be positive");
  if (o.n < 2) throw usage_error("--n must be at least 2");
  const auto reports = run_replications(o, common.seed);
  const auto a = aggregate(o, reports);

  auto env = make_envelope("estimate", common);
  env.parameters["n"] = o.n;
  env.parameters["r_true"] = o.r;
  env.parameters["m"] = o.m;
  env.parameters["replications"] = o.replications;
  env.parameters["sampler"] = o.sampler;
  env.summary["mean_r_hat"] = a.mean_r_hat;
  env.summary["bias"] = a.bias;
  env.summary["bias_se"] = a.bias_se;
  env.summary["empirical_var"] = a.empirical_var;
  env.summary["replication_var"] = a.replication_var;
  env.summary["var_closed_form"] = a.var_closed_form;
  env.summary["crlb"] = a.crlb ? Json(*a.crlb) : Json(nullptr);
  env.summary["efficiency"] = a.efficiency ? Json(*a.efficiency) : Json(nullptr);
  env.summary["crlb_available"] = a.crlb.has_value();
  if (!a.crlb) env.notes.push_back(reports.front().crlb_note);
  env.columns = {"replication", "n", "r_true", "m", "r_hat", "var_closed_form",
                 "crlb", "efficiency", "empirical_var", "plug_in"};
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& rep = reports[k];
    env.rows.push_back({k, rep.n, opt(rep.r_true), rep.m, rep.r_hat, rep.var_closed_form,
                        opt(rep.crlb), opt(rep.efficiency), opt(rep.empirical_var), rep.plug_in});
  }
  write_envelope(out, env, common.format);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  std::string which = "gap";
  std::optional<std::string> range;
  std::optional<double> epsilon;
};

/// Relative tolerance for the quadrature cross-check of the Fisher table.
inline constexpr double kFisherOracleTolerance = 1e-8;

inline int cmd_analyze(const AnalyzeOptions& o, const CommonOptions& common, std::ostream& out) {
  auto env = make_envelope("analyze", common);
  env.parameters["which"] = o.which;
  int status = kSuccess;
  if (o.which == "gap") {
    const auto range = parse_range(o.range.value_or("2:60"));
    if (range.lo < 2) throw usage_error("gap range must start at 2 or above");
    const double eps = o.epsilon.value_or(default_saturation_epsilon());
    if (!(eps > 0.0)) throw usage_error("--epsilon must be positive");
    env.parameters["range"] = std::to_string(range.lo) + ':' + std::to_string(range.hi);
    env.parameters["epsilon"] = eps;
    const auto table = gap_table(range.lo, range.hi);
    const auto sat = detect_saturation(table, eps);
    env.summary["saturation"] = sat ? Json(*sat) : Json(nullptr);
    env.columns = {"n", "c_n", "gap"};
    for (const auto& row : table) env.rows.push_back({row.n, row.c_n, row.gap});
  } else if (o.which == "fisher") {
    const auto range = parse_range(o.range.value_or("5:30"));
    if (range.lo <= 4) throw usage_error("fisher range must start above 4 (I(r) is not finite for n <= 4)");
    env.parameters["range"] = std::to_string(range.lo) + ':' + std::to_string(range.hi);
    const auto argmin = fisher_argmin(range.lo, range.hi);
    env.summary["continuous_argmin"] = argmin.continuous;
    env.summary["integer_argmin"] = argmin.integer_minimizers;
    env.summary["integer_minimum"] = 4.0 * argmin.integer_minimum;
    double worst = 0.0;
    env.columns = {"n", "fisher", "fisher_numeric", "rel_error"};
    for (int n = range.lo; n <= range.hi; ++n) {
      const double closed = fisher_closed(n, 1.0);
      const auto q = fisher_numeric(n, 1.0);
      const double rel = std::abs(q.value - closed) / closed;
      worst = std::max(worst, q.converged ? rel : std::numeric_limits<double>::infinity());
      env.rows.push_back({n, closed, q.value, rel});
    }
    env.summary["max_rel_error"] = worst;
    if (!(worst <= kFisherOracleTolerance)) {
      env.notes.push_back("closed form and quadrature disagree beyond 1e-8");
      status = kOracle;
    }
  } else if (o.which == "volume") {
    const auto range = parse_range(o.range.value_or("1:20"));
    if (range.lo < 1) throw usage_error("volume range must start at 1 or above");
    env.parameters["range"] = std::to_string(range.lo) + ':' + std::to_string(range.hi);
    const auto vol = argmax_over(range.lo, range.hi, SphereMetric::volume);
    const auto area = argmax_over(range.lo, range.hi, SphereMetric::surface_area);
    env.summary["volume_argmax"] = vol.argmax;
    env.summary["surface_area_argmax"] = area.argmax;
    env.notes.push_back(kDimensionSevenNote);
    env.columns = {"n", "volume", "surface_area"};
    for (const auto& row : vol.table) env.rows.push_back({row.n, row.volume, row.surface_area});
  } else {
    throw usage_error("--which must be gap, fisher or volume");
  }
  write_envelope(out, env, common.format);
  return status;
}

// ---------------------------------------------------------------------------
// charfun

struct CharfunOptions {
  int n = 2;
  double r = 1.0;
  std::string t = "-20:20:0.1";
};

inline int cmd_charfun(const CharfunOptions& o, const CommonOptions& common, std::ostream& out) {
  const ChordDistribution d(o.n, o.r);
  const Grid grid = parse_grid(o.t);
  for (double t : {grid.lo, grid.hi})
    if (std::abs(t) * o.r > kMaxOscillation)
      throw usage_error("|t| r above 1e3 is outside the supported range");

  auto env = make_envelope("charfun", common);
  env.parameters["n"] = o.n;
  env.parameters["r"] = o.r;
  env.parameters["t"] = grid.text();
  env.columns = {"t", "re", "im", "abs", "source"};
  double worst = 0.0;
  bool compared = false;
  for (double t : grid.points()) {
    const ComplexValue numeric = phi_numeric(d, t).value;
    ComplexValue value = numeric;
    std::string source = "quadrature";
    if (o.n == 2 || (o.n == 3 && std::abs(2.0 * o.r * t) <= kMaxStruveArgument)) {
      value = o.n == 2 ? phi_closed_n2(o.r, t) : phi_closed_n3(o.r, t);
      source = "closed";
      worst = std::max(worst, std::abs(value - numeric));
      compared = true;
    }
    env.rows.push_back({t, value.real(), value.imag(), std::abs(value), source});
  }
  env.summary["max_deviation"] = compared ? Json(worst) : Json(nullptr);
  int status = kSuccess;
  if (compared && !(worst <= kCharfunOracleTolerance)) {
    env.notes.push_back("closed form and quadrature disagree beyond 1e-6");
    status = kOracle;
  }
  write_envelope(out, env, common.format);
  return status;
}

}  // namespace hyperchord::cli
