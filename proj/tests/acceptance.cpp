// Acceptance run: every criterion at its full size, one PASS/FAIL line each.
// Exit status is nonzero if a criterion outside kKnownFailures fails.

#include <chrono>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "brw/experiments.hpp"
#include "brw/replicas.hpp"
#include "brw/report.hpp"

using namespace brw;

namespace {

// Criteria that fail at the pinned sizes for reasons analysed in the README.
const std::set<int> kKnownFailures = {8, 11};

struct Timed {
  ExperimentReport report;
  double seconds = 0.0;
};

Timed timed_run(RunConfig c) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed t;
  t.report = run_experiment(c);
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

std::string fmt(double v) { return format_double(v); }

std::string show(const ExperimentReport& r, const std::string& name) {
  const auto& c = r.check(name);
  return name.substr(name.find('.') + 1) + "=" + fmt(c.value) + " " + c.relation + " " + fmt(c.threshold);
}

bool ok(const ExperimentReport& r, const std::string& name) { return r.check(name).passed; }

struct Tally {
  int unexpected = 0;
  void line(int id, const std::string& title, bool pass, const std::string& detail) {
    const bool known = kKnownFailures.count(id) > 0;
    const char* tag = pass ? (known ? "PASS (listed as known failure)" : "PASS") : (known ? "FAIL (known)" : "FAIL");
    std::printf("criterion %2d %-34s %s | %s\n", id, title.c_str(), tag, detail.c_str());
    std::fflush(stdout);
    if (!pass && !known) ++unexpected;
  }
};

RunConfig cfg(const std::string& e) {
  RunConfig c;
  c.experiment = e;
  return c;
}

}  // namespace

int main() {
  Tally t;
  std::printf("threads: %d\n", default_threads());

  const auto oracles = timed_run(cfg("oracles"));
  const auto& o = oracles.report;
  const std::string secs = " time=" + fmt(oracles.seconds) + "s";
  t.line(1, "excursion pmf exactness", ok(o, "oracles.excursion_pmf_max_abs_diff") && oracles.seconds < 5.0,
         show(o, "oracles.excursion_pmf_max_abs_diff") + secs + " < 5");
  t.line(2, "generating-function exactness",
         ok(o, "oracles.gw_convolution_max_abs_diff") && ok(o, "oracles.gw_semigroup_max_abs_diff"),
         show(o, "oracles.gw_convolution_max_abs_diff") + "; " + show(o, "oracles.gw_semigroup_max_abs_diff"));
  t.line(3, "distance formula vs BFS", ok(o, "oracles.distance_mismatches") && oracles.seconds < 10.0,
         show(o, "oracles.distance_mismatches") + secs + " < 10");
  t.line(4, "xi kernel vs naive scan", ok(o, "oracles.xi_kernel_mismatches") && ok(o, "oracles.xi_bfs_mismatches"),
         show(o, "oracles.xi_kernel_mismatches") + "; " + show(o, "oracles.xi_bfs_mismatches"));

  const auto bad = timed_run(cfg("badpoints"));
  const auto& b = bad.report;
  {
    bool all = true;
    double worst = 0.0;
    for (const auto& c : b.checks)
      if (c.name.rfind("badpoints.rate_z.", 0) == 0) {
        all = all && c.passed;
        worst = std::max(worst, c.value);
      }
    t.line(5, "bad-point rate 1/(8d)", all && bad.seconds < 60.0,
           "max |z| over d in {1,2,5} and classes=" + fmt(worst) + " <= 4 time=" + fmt(bad.seconds) + "s < 60");
  }
  t.line(6, "pathwise identity", ok(b, "badpoints.identity_violations"), show(b, "badpoints.identity_violations"));
  t.line(7, "gap law and independence", ok(b, "badpoints.gap_chi_p") && ok(b, "badpoints.corr_in_se"),
         show(b, "badpoints.gap_chi_p") + "; " + show(b, "badpoints.corr_in_se"));

  const auto trunc = timed_run(cfg("truncation"));
  t.line(8, "truncation bias decay", ok(trunc.report, "truncation.slope"),
         show(trunc.report, "truncation.slope") + "; " + show(trunc.report, "truncation.translation_invariance_z"));

  const auto var = timed_run(cfg("variance"));
  t.line(9, "linear variance", ok(var.report, "variance.plateau_ratio") && ok(var.report, "variance.kappa_ci99_lo"),
         show(var.report, "variance.plateau_ratio") + "; " + show(var.report, "variance.kappa_ci99_lo") +
             " time=" + fmt(var.seconds) + "s");

  const auto clt = timed_run(cfg("clt"));
  const auto& c = clt.report;
  t.line(10, "CLT at n = 2^14",
         ok(c, "clt.abs_skewness") && ok(c, "clt.abs_excess_kurtosis") && ok(c, "clt.ks_distance"),
         show(c, "clt.abs_skewness") + "; " + show(c, "clt.abs_excess_kurtosis") + "; " + show(c, "clt.ks_distance"));

  const auto cov = timed_run(cfg("covariance"));
  t.line(11, "covariance decay", ok(cov.report, "covariance.slope") && ok(cov.report, "covariance.partial_sum_change_in_se"),
         show(cov.report, "covariance.slope") + "; " + show(cov.report, "covariance.partial_sum_change_in_se") + "; " +
             show(cov.report, "covariance.independence_p"));

  const auto four = timed_run(cfg("fourth-moment"));
  t.line(12, "fourth moment growth", ok(four.report, "fourth-moment.slope"), show(four.report, "fourth-moment.slope"));

  const auto con = timed_run(cfg("contour"));
  t.line(13, "hitting-probability decay", ok(con.report, "range.hitting_slope"), show(con.report, "range.hitting_slope"));

  // Determinism: reduced sizes, worker counts 1, 4, 8, both formats.
  {
    std::vector<RunConfig> runs;
    auto add = [&](std::string e, std::size_t replicas, std::vector<Index> grid = {}) {
      RunConfig r;
      r.experiment = std::move(e);
      r.replicas = replicas;
      r.n_grid = std::move(grid);
      runs.push_back(r);
    };
    add("oracles", 20);
    add("contour", 2000, {512});
    add("variance", 200, {256, 1024});
    add("clt", 200, {256, 1024});
    add("fourth-moment", 200, {256, 1024});
    add("covariance", 1000, {1024});
    add("truncation", 500, {256});
    add("badpoints", 200, {200});
    add("all", 200);
    int mismatched = 0;
    for (auto r : runs) {
      std::string ref_csv, ref_json;
      for (int threads : {1, 4, 8}) {
        r.threads = threads;
        const auto rep = run_experiment(r);
        const auto csv = render(rep, "csv");
        const auto json = render(rep, "json");
        if (threads == 1) {
          ref_csv = csv;
          ref_json = json;
        } else if (csv != ref_csv || json != ref_json) {
          ++mismatched;
          std::printf("  determinism mismatch: %s threads=%d\n", r.experiment.c_str(), threads);
        }
      }
    }
    t.line(14, "determinism across workers", mismatched == 0,
           std::to_string(runs.size()) + " experiments x threads {1,4,8}, mismatches=" + std::to_string(mismatched));
  }

  std::printf("unexpected failures: %d\n", t.unexpected);
  return t.unexpected == 0 ? 0 : 1;
}
