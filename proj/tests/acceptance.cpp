// Acceptance checks. `acceptance <id>` runs one criterion, `acceptance all`
// runs every one. Each criterion prints a PASS/FAIL line followed by its
// individual checks; the exit status is non-zero if any check failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "hyperchord/hyperchord.hpp"
#include "oracles.hpp"

namespace hc = hyperchord;

namespace {

class Report {
 public:
  void check(bool ok, const std::string& what) {
    lines_.push_back(std::string(ok ? "  ok    " : "  FAIL  ") + what);
    passed_ = passed_ && ok;
  }
  void info(const std::string& what) { lines_.push_back("  info  " + what); }
  bool passed() const { return passed_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
  bool passed_ = true;
};

std::string fmt(const char* pattern, double a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Report&)> body;
};

void normalization(Report& rep) {
  double worst = 0.0;
  bool converged = true;
  for (int n : {2, 3, 5, 7, 19, 50}) {
    for (double r : {0.5, 1.0, 10.0}) {
      const hc::ChordDistribution d(n, r);
      const auto q = hc::integrate([&](double x) { return d.pdf(x); }, 0.0, d.support_max());
      converged = converged && q.converged;
      worst = std::max(worst, std::abs(q.value - 1.0));
    }
  }
  rep.check(converged, "quadrature converged for all 18 (n, r) pairs");
  rep.check(worst <= 1e-10, fmt("max |integral - 1| = %.3g (tol 1e-10)", worst));
}

void median(Report& rep) {
  double worst = 0.0;
  for (int n = 2; n <= 60; ++n)
    for (double r : {1.0, 2.5})
      worst = std::max(worst, std::abs(hc::ChordDistribution(n, r).cdf(std::numbers::sqrt2 * r) - 0.5));
  rep.check(worst <= 1e-12, fmt("max |cdf(sqrt2 r) - 0.5| over n = 2..60 is %.3g (tol 1e-12)", worst));
}

void mode(Report& rep) {
  double worst = 0.0;
  for (int n = 3; n <= 40; ++n) {
    for (double r : {1.0, 3.0}) {
      const hc::ChordDistribution d(n, r);
      const double numeric = oracles::golden_section_max([&](double x) { return d.pdf(x); }, 0.0,
                                                         d.support_max(), 1e-12 * r);
      const double closed = 2.0 * r * std::sqrt((n - 1.0) / (2.0 * n - 3.0));
      worst = std::max(worst, std::abs(numeric - closed) / r);
      if (std::abs(d.mode().location - closed) > 1e-14 * r) {
        rep.check(false, fmt("mode() differs from the closed form at n = %.0f", n));
        return;
      }
    }
  }
  rep.check(worst <= 1e-6, fmt("max |golden-section argmax - closed form| / r = %.3g (tol 1e-6)", worst));
}

void moments(Report& rep) {
  bool exact = true;
  double worst_quad = 0.0;
  for (int n : {2, 3, 7, 19, 50}) {
    for (double r : {0.5, 1.0, 10.0}) {
      const hc::ChordDistribution d(n, r);
      exact = exact && d.raw_moment(2) == 2.0 * r * r;
      const auto q = hc::integrate(
          [&](double x, double, double gap) { return x * x * std::exp(d.log_pdf_split(x, gap)); }, 0.0,
          d.support_max());
      worst_quad = std::max(worst_quad, std::abs(q.value - 2.0 * r * r) / (2.0 * r * r));
    }
  }
  rep.check(exact, "raw_moment(2) == 2 r^2 exactly for n in {2,3,7,19,50}, r in {0.5,1,10}");
  rep.check(worst_quad <= 1e-10, fmt("quadrature E[X^2] relative error %.3g (tol 1e-10)", worst_quad));
  const double m1 = hc::ChordDistribution(2, 1.0).raw_moment(1);
  rep.check(std::abs(m1 - 4.0 / 3.0) <= 1e-12, fmt("raw_moment(1) at n=2, r=1 is %.17g (4/3 within 1e-12)", m1));
  for (int n : {2, 7, 19}) {
    const hc::ChordDistribution d(n, 1.0);
    const auto batch = hc::sample_chords_geometric(n, 1.0, 100000, {2024, static_cast<std::uint64_t>(n)});
    const auto s = hc::summarize(batch.values);
    const double z = (s.mean - d.mean()) / s.std_error;
    rep.check(std::abs(z) <= 4.0,
              fmt("Monte Carlo mean at N=1e5, n=%.0f: deviation %.2f SE (band 4 SE)", n, z));
  }
}

void fisher(Report& rep) {
  double worst = 0.0;
  bool converged = true;
  for (int n = 5; n <= 40; ++n) {
    for (double r : {0.5, 1.0, 10.0}) {
      const auto q = hc::fisher_numeric(n, r);
      converged = converged && q.converged;
      worst = std::max(worst, std::abs(q.value / hc::fisher_closed(n, r) - 1.0));
    }
  }
  rep.check(converged, "fisher_numeric converged for n = 5..40, r in {0.5,1,10}");
  rep.check(worst <= 1e-8, fmt("max relative |numeric/closed - 1| = %.3g (tol 1e-8)", worst));
  rep.check(hc::fisher_closed(5, 1.0) == 80.0, fmt("I(1) at n=5 is %.17g (expected 80)", hc::fisher_closed(5, 1.0)));
  const auto argmin = hc::fisher_argmin(5, 40);
  rep.check(argmin.integer_minimizers == std::vector<int>{7, 8} && 4.0 * argmin.integer_minimum == 56.0,
            fmt("integer minimisers {7, 8}, I(1) = %.17g (expected 56)", 4.0 * argmin.integer_minimum));
  // Root of d/dn [n(n-1)/(n-4)] by bisection on a central-difference derivative.
  auto g = [](double n) { return n * (n - 1.0) / (n - 4.0); };
  auto dg = [&](double n) {
    const double h = 1e-5;
    return (g(n + h) - g(n - h)) / (2.0 * h);
  };
  double lo = 5.0;
  double hi = 12.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (dg(mid) < 0.0 ? lo : hi) = mid;
  }
  const double numeric = 0.5 * (lo + hi);
  rep.check(std::abs(argmin.continuous - (4.0 + 2.0 * std::sqrt(3.0))) <= 1e-9,
            fmt("continuous minimiser %.12f equals 4 + 2 sqrt3 (tol 1e-9)", argmin.continuous));
  rep.check(std::abs(numeric - argmin.continuous) <= 1e-9,
            fmt("derivative-root search gives %.12f (tol 1e-9)", numeric));
}

void cramer_rao(Report& rep) {
  bool holds = true;
  for (int n = 5; n <= 200; ++n)
    holds = holds && hc::estimator_variance_closed(n, 1.0, 1) >= hc::crlb(n, 1.0, 1);
  rep.check(holds, "estimator_variance_closed >= crlb for n = 5..200");
  const double ratio = hc::estimator_variance_closed(1000, 1.0, 1) / hc::crlb(1000, 1.0, 1);
  rep.check(std::abs(ratio / 2.0 - 1.0) <= 0.02,
            fmt("variance/bound at n=1000 is %.8f (required within 2%% of 2)", ratio));
  rep.info(fmt("2 - C_n^2 ~ 1/(2n) gives variance/bound -> 1; at n=1000 the derived value is %.8f",
               ratio));
}

void estimator_simulation(Report& rep) {
  hc::cli::EstimateOptions o;
  o.n = 10;
  o.r = 2.0;
  o.m = 100000;
  o.replications = 50;
  const auto reports = hc::cli::run_replications(o, 20240517);
  const auto a = hc::cli::aggregate(o, reports);
  rep.check(std::abs(a.bias) <= 3.0 * a.bias_se,
            fmt("aggregate bias %.3g, %.2f SE (band 3 SE)", a.bias, a.bias / a.bias_se));
  const double rel = a.empirical_var / a.var_closed_form - 1.0;
  rep.check(std::abs(rel) <= 0.05,
            fmt("empirical variance / closed form - 1 = %.4f (tol 0.05)", rel));
  rep.info(fmt("variance of r_hat across 50 replications / closed form = %.3f", a.replication_var / a.var_closed_form));
}

void sampler_triangulation(Report& rep) {
  const std::size_t count = 10000;
  for (int n : {2, 3, 7, 19, 50}) {
    const auto u = static_cast<std::uint64_t>(n);
    const auto geo = hc::sample_chords_geometric(n, 1.0, count, {101, u});
    const auto beta = hc::sample_chords_beta_transform(n, 1.0, count, {102, u});
    const auto inv = hc::sample_chords_inverse_cdf(n, 1.0, count, {103, u});
    const auto a = hc::ks_two_sample(geo.values, beta.values);
    const auto b = hc::ks_two_sample(geo.values, inv.values);
    const auto c = hc::ks_two_sample(beta.values, inv.values);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "n=%d two-sample KS p: geometric/beta %.3f, geometric/inverse %.3f, beta/inverse %.3f",
                  n, a.p_value, b.p_value, c.p_value);
    rep.check(a.passes && b.passes && c.passes, buf);
    const hc::ChordDistribution d(n, 1.0);
    const auto one = hc::ks_one_sample(beta.values, [&](double x) { return d.cdf(x); });
    std::snprintf(buf, sizeof buf, "n=%d one-sample KS of beta_transform: D=%.4f (critical %.4f)", n,
                  one.statistic, one.critical);
    rep.check(one.passes, buf);
  }
}

void characteristic_functions(Report& rep) {
  bool unit_at_zero = true;
  bool bounded = true;
  bool symmetric = true;
  auto inspect = [&](hc::ComplexValue plus, hc::ComplexValue minus) {
    bounded = bounded && std::abs(plus) <= 1.0 + 1e-12 && std::abs(minus) <= 1.0 + 1e-12;
    symmetric = symmetric && std::abs(plus - std::conj(minus)) <= 1e-12;
  };
  for (double r : {0.5, 1.0}) {
    const hc::ChordDistribution d2(2, r);
    const hc::ChordDistribution d3(3, r);
    unit_at_zero = unit_at_zero && hc::phi_closed_n2(r, 0.0) == 1.0 && hc::phi_closed_n3(r, 0.0) == 1.0 &&
                   hc::phi_numeric(d2, 0.0).value == 1.0;
    double worst2 = 0.0;
    for (int i = 0; i <= 800; ++i) {
      const double t = -20.0 + 0.05 * i;
      const auto closed = hc::phi_closed_n2(r, t);
      worst2 = std::max(worst2, std::abs(closed - hc::phi_numeric(d2, t).value));
      inspect(closed, hc::phi_closed_n2(r, -t));
    }
    double worst3 = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double t = -10.0 + 0.05 * i;
      const auto closed = hc::phi_closed_n3(r, t);
      const auto numeric = hc::phi_numeric(d3, t).value;
      worst3 = std::max(worst3, std::abs(closed - numeric));
      inspect(closed, hc::phi_closed_n3(r, -t));
      inspect(numeric, hc::phi_numeric(d3, -t).value);
    }
    rep.check(worst2 < 1e-10, fmt("n=2, r=%.1f: max |closed - quadrature| over [-20, 20] = %.3g (tol 1e-10)", r, worst2));
    rep.check(worst3 < 1e-8, fmt("n=3, r=%.1f: max |closed - quadrature| over [-10, 10] = %.3g (tol 1e-8)", r, worst3));
  }
  rep.check(unit_at_zero, "phi(0) = 1 for both closed forms and quadrature");
  rep.check(bounded, "|phi(t)| <= 1 at every grid point");
  rep.check(symmetric, "phi(-t) = conj(phi(t)) at every grid point");
  const auto terms = hc::phi_closed_n3_terms(1.0, 5.0);
  const double dev = std::abs(terms.sum() - hc::phi_numeric(hc::ChordDistribution(3, 1.0), 5.0).value);
  rep.info(fmt("n=3 terms at r=1, t=5: linear %.12fi, bessel %.12f", terms.linear.imag(), terms.bessel.real()) +
           fmt(", struve %.12fi; |sum - quadrature| = %.3g", terms.struve.imag(), dev));
}

void critical_dimension(Report& rep) {
  const auto table = hc::gap_table(2, 200);
  bool decreasing = true;
  for (std::size_t i = 1; i < table.size(); ++i) decreasing = decreasing && table[i].gap < table[i - 1].gap;
  rep.check(decreasing, "gap strictly decreasing on n = 2..200");
  const double gap19 = hc::gap_row(19).gap;
  const double target = 1.0 / (2.0 * std::numbers::sqrt2 * 19.0);
  rep.check(std::abs(gap19 / target - 1.0) <= 0.05,
            fmt("gap(19) = %.10f vs 1/(2 sqrt2 19) = %.10f (tol 5%%)", gap19, target));
  rep.info(fmt("leading-order asymptotic is 1/(4 sqrt2 n); gap(19) / (1/(4 sqrt2 19)) = %.6f",
               gap19 / oracles::gap_asymptotic(19)));
  const auto sat = hc::detect_saturation(table, hc::default_saturation_epsilon());
  rep.check(sat == 19, fmt("detect_saturation with the default epsilon returns %.0f", sat.value_or(-1)));
}

void geometry_tables(Report& rep) {
  double worst = 0.0;
  for (int n = 1; n <= 100; ++n) {
    const double direct = std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0));
    worst = std::max(worst, std::abs(hc::volume(n) - direct) / direct);
  }
  rep.check(worst <= 1e-12, fmt("V_n vs direct std::lgamma evaluation, n = 1..100: max rel error %.3g", worst));
  const int vol = hc::argmax_over(1, 20, hc::SphereMetric::volume).argmax;
  const int area = hc::argmax_over(1, 20, hc::SphereMetric::surface_area).argmax;
  rep.check(vol == 5, fmt("argmax of V_n over [1, 20] is %.0f", vol));
  rep.check(area == 6, fmt("argmax of A_n over [1, 20] is %.0f", area));
  std::ostringstream out;
  hc::cli::AnalyzeOptions o;
  o.which = "volume";
  o.range = "1:20";
  hc::cli::cmd_analyze(o, {}, out);
  const bool noted = out.str().find(std::string("# note: ") + hc::cli::kDimensionSevenNote) != std::string::npos;
  rep.check(noted, "analyze --which volume emits the dimension-7 discrepancy note");
}

void unimodal_inequality(Report& rep) {
  double largest = 0.0;
  double disagreement = 0.0;
  for (int n = 2; n <= 200; ++n) {
    const double a = hc::median_deviation_ratio(n);
    largest = std::max(largest, a);
    disagreement = std::max(disagreement, std::abs(a - hc::median_deviation_ratio_factored(n)));
  }
  rep.check(largest <= 0.6, fmt("max (median - mean)^2 / variance over n = 2..200 is %.6f (bound 3/5)", largest));
  rep.check(disagreement <= 1e-12, fmt("two forms of the ratio differ by at most %.3g (tol 1e-12)", disagreement));
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "normalization", 5, normalization},
      {2, "universal median", 1, median},
      {3, "mode formula", 5, mode},
      {4, "moments", 30, moments},
      {5, "Fisher closed form", 60, fisher},
      {6, "Cramer-Rao bound", 1, cramer_rao},
      {7, "estimator simulation", 60, estimator_simulation},
      {8, "sampler triangulation", 30, sampler_triangulation},
      {9, "characteristic functions", 60, characteristic_functions},
      {10, "critical dimension", 1, critical_dimension},
      {11, "geometry tables", 1, geometry_tables},
      {12, "unimodal inequality", 1, unimodal_inequality},
  };
  return all;
}

bool run(const Criterion& c) {
  Report rep;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.body(rep);
  } catch (const std::exception& e) {
    rep.check(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rep.check(seconds < c.budget_seconds, fmt("runtime %.2f s (budget %.0f s)", seconds, c.budget_seconds));
  std::printf("criterion %2d: %s  %s\n", c.id, rep.passed() ? "PASS" : "FAIL", c.title);
  for (const auto& line : rep.lines()) std::printf("%s\n", line.c_str());
  std::fflush(stdout);
  return rep.passed();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <1-12|all>\n");
    return 2;
  }
  const std::string which = argv[1];
  bool ok = true;
  bool found = false;
  for (const auto& c : criteria()) {
    if (which == "all" || which == std::to_string(c.id)) {
      found = true;
      ok = run(c) && ok;
    }
  }
  if (!found) {
    std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
    return 2;
  }
  return ok ? 0 : 1;
}
