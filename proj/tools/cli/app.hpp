#pragma once

// Flag parsing and dispatch for the hyperchord executable.

#include <cstdlib>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace hyperchord::cli {

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("HYPERCHORD_SEED");
  if (!env || !*env) return 0;
  try {
    std::size_t used = 0;
    const std::string text(env);
    if (text.front() == '-') throw std::invalid_argument(text);
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw usage_error(std::string("HYPERCHORD_SEED is not an unsigned integer: '") + env + "'");
  }
}

/// Runs one invocation; returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Chord-length distribution on n-spheres: tables, sampling and estimation",
               "hyperchord"};
  app.set_version_flag("--version", HYPERCHORD_VERSION);
  app.require_subcommand(1);

  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  bool timestamp = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "RNG seed (falls back to HYPERCHORD_SEED, then 0)");
    sub->add_flag("--timestamp", timestamp, "Add a UTC timestamp to the provenance block");
  };

  DistOptions dist;
  auto* dist_cmd = app.add_subcommand("dist", "Evaluate pdf, cdf or quantile on a grid");
  dist_cmd->add_option("--n", dist.n, "Sphere dimension (>= 2)")->required();
  dist_cmd->add_option("--r", dist.r, "Radius (> 0)");
  dist_cmd->add_option("--which", dist.which, "pdf | cdf | quantile");
  dist_cmd->add_option("--grid", dist.grid, "lo:hi:step, inclusive");
  add_common(dist_cmd);

  SampleOptions sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a batch of chord lengths");
  sample_cmd->add_option("--n", sample.n, "Sphere dimension (>= 2)")->required();
  sample_cmd->add_option("--r", sample.r, "Radius (> 0)");
  sample_cmd->add_option("--count", sample.count, "Number of chords");
  sample_cmd->add_option("--sampler", sample.sampler,
                         "geometric | beta_transform | inverse_cdf | angular");
  sample_cmd->add_option("--stream", sample.stream, "RNG stream id");
  sample_cmd->add_option("--compare", sample.compare, "Second sampler for a two-sample KS test");
  sample_cmd->add_option("--output", sample.output, "Write the batch file here");
  add_common(sample_cmd);

  EstimateOptions estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Monte Carlo study of the radius estimator");
  estimate_cmd->add_option("--n", estimate.n, "Sphere dimension (>= 2)")->required();
  estimate_cmd->add_option("--r", estimate.r, "True radius (> 0)");
  estimate_cmd->add_option("--m", estimate.m, "Chords per replication");
  estimate_cmd->add_option("--replications", estimate.replications, "Number of replications");
  estimate_cmd->add_option("--sampler", estimate.sampler, "Sampler used for each replication");
  estimate_cmd->add_option("--threads", estimate.threads, "Worker threads (0: all cores)");
  add_common(estimate_cmd);

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Gap, Fisher and sphere-volume tables");
  analyze_cmd->add_option("--which", analyze.which, "gap | fisher | volume");
  analyze_cmd->add_option("--range", analyze.range, "lo:hi over integer n");
  analyze_cmd->add_option("--epsilon", analyze.epsilon, "Saturation threshold for --which gap");
  add_common(analyze_cmd);

  CharfunOptions charfun;
  auto* charfun_cmd = app.add_subcommand("charfun", "Characteristic function on a t grid");
  charfun_cmd->add_option("--n", charfun.n, "Sphere dimension (>= 2)")->required();
  charfun_cmd->add_option("--r", charfun.r, "Radius (> 0)");
  charfun_cmd->add_option("--t", charfun.t, "lo:hi:step, inclusive");
  add_common(charfun_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << HYPERCHORD_VERSION << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    CommonOptions common;
    common.format = format == "json" ? Format::json : Format::csv;
    common.seed = resolve_seed(seed);
    common.timestamp = timestamp;
    if (app.got_subcommand(dist_cmd)) return cmd_dist(dist, common, out);
    if (app.got_subcommand(sample_cmd)) return cmd_sample(sample, common, out);
    if (app.got_subcommand(estimate_cmd)) return cmd_estimate(estimate, common, out);
    if (app.got_subcommand(analyze_cmd)) return cmd_analyze(analyze, common, out);
    return cmd_charfun(charfun, common, out);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const hyperchord::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << '\n';
    return kOracle;
  }
}

}  // namespace hyperchord::cli
