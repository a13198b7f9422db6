#include "brw/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "brw/analytic.hpp"
#include "brw/badpoints.hpp"
#include "brw/errors.hpp"
#include "brw/oracles.hpp"
#include "brw/replicas.hpp"

namespace brw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Part tags: every part draws its replica seeds from mix64(seed + tag).
enum PartTag : std::uint64_t {
  kTagDistance = 11,
  kTagXiOracle = 12,
  kTagContourTwo = 21,
  kTagExcursion = 22,
  kTagUpStep = 23,
  kTagShift = 24,
  kTagBall = 25,
  kTagHitting = 26,
  kTagRangeConstant = 27,
  kTagXiSums = 31,
  kTagCovariance = 41,
  kTagIndependence = 42,
  kTagTruncation = 51,
  kTagBadRate = 61,
  kTagGapBattery = 62,
};

std::uint64_t part_seed(const RunConfig& c, PartTag tag) { return mix64(c.seed + tag); }

struct Defaults {
  std::size_t dim;
  std::vector<Index> n_grid;
  std::int64_t k;
  std::size_t replicas;
  bool takes_dim, takes_n, takes_k, takes_past;
  bool single_n;
};

const Defaults& defaults_for(std::string_view e) {
  static const std::map<std::string, Defaults, std::less<>> table = {
      {"oracles", {0, {}, -1, 1000, false, false, false, false, false}},
      {"contour", {5, {4096}, 64, 1000000, true, true, true, true, true}},
      {"variance", {17, {1024, 4096, 16384}, 16, 10000, true, true, true, true, false}},
      {"clt", {17, {1024, 4096, 16384}, 16, 10000, true, true, true, true, false}},
      {"fourth-moment", {17, {1024, 4096, 16384}, 16, 10000, true, true, true, true, false}},
      {"covariance", {9, {4096}, 4, 25000, true, true, true, false, true}},
      {"truncation", {9, {1024}, 64, 100000, true, true, true, false, true}},
      {"badpoints", {5, {1000}, -1, 10000, true, true, false, true, true}},
      {"all", {0, {}, -1, 10000, false, false, false, false, false}},
  };
  const auto it = table.find(e);
  if (it == table.end()) throw UsageError("unknown experiment '" + std::string(e) + "'");
  return it->second;
}

std::string past_label(bool automatic, Index past) { return automatic ? "auto" : std::to_string(past); }

// Replica count of a part whose count at default scale is `base_part`.
std::size_t scaled(const RunConfig& c, double base_part) {
  const double f = static_cast<double>(c.replicas) / static_cast<double>(base_replicas(c.experiment));
  return static_cast<std::size_t>(std::max(1.0, std::round(base_part * f)));
}

class Builder {
 public:
  explicit Builder(ExperimentReport& r) : rep_(r) {}

  struct Scope {
    std::string name;
    std::size_t d = 0;
    Index n = 0;
    std::int64_t k = 0;
    std::string M = "na";
    std::size_t replicas = 0;
    std::uint64_t seed = 0;
  };

  void row(const Scope& s, std::string stat, double value, double se = kNaN) {
    rep_.rows.push_back({s.name, s.d, s.n, s.k, s.M, s.replicas, s.seed, std::move(stat), value, se});
  }
  void row_at(const Scope& s, Index n, std::int64_t k, std::string stat, double value, double se = kNaN) {
    Scope t = s;
    t.n = n;
    t.k = k;
    row(t, std::move(stat), value, se);
  }

  void check(std::string name, double value, std::string relation, double threshold) {
    bool ok = false;
    if (relation == "<=") ok = value <= threshold;
    else if (relation == "<") ok = value < threshold;
    else if (relation == ">=") ok = value >= threshold;
    else if (relation == ">") ok = value > threshold;
    else if (relation == "==") ok = value == threshold;
    else throw ContractError("unknown relation " + relation);
    rep_.checks.push_back({std::move(name), ok, value, threshold, std::move(relation)});
  }

 private:
  ExperimentReport& rep_;
};

double max_abs_diff(const Pmf& a, const Pmf& b) {
  const auto n = std::max(a.probs.size(), b.probs.size());
  double worst = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double x = m < a.probs.size() ? a.probs[m] : 0.0;
    const double y = m < b.probs.size() ? b.probs[m] : 0.0;
    worst = std::max(worst, std::abs(x - y));
  }
  return worst;
}

// ---------------------------------------------------------------- oracles

void run_oracles(const RunConfig& c, Builder& b) {
  {
    double worst = 0.0;
    for (std::int64_t n = 1; n <= 14; ++n) {
      const auto brute = brute_force_excursion_pmf(n);
      for (std::int64_t m = 0; m <= n; ++m) worst = std::max(worst, std::abs(excursion_pmf(n, m) - brute.at(m)));
    }
    b.row({"oracles.excursion_pmf", 0, 14}, "max_abs_diff", worst);
    b.check("oracles.excursion_pmf_max_abs_diff", worst, "<=", 1e-12);
  }
  {
    double conv = 0.0;
    for (std::int64_t l = 1; l <= 4; ++l)
      conv = std::max(conv, max_abs_diff(gw_generation_pmf(l, 32), gw_generation_pmf_by_convolution(l, 32)));
    double semi = 0.0;
    for (std::int64_t l = 1; l <= 20; ++l)
      for (int t = 0; t < 100; ++t) {
        const double s = t / 99.0;
        semi = std::max(semi, std::abs(gw_generating_function(l + 1, s) -
                                       gw_generating_function(1, gw_generating_function(l, s))));
      }
    b.row({"oracles.gw_pmf"}, "convolution_max_abs_diff", conv);
    b.row({"oracles.gw_pmf"}, "semigroup_max_abs_diff", semi);
    b.check("oracles.gw_convolution_max_abs_diff", conv, "<=", 1e-10);
    b.check("oracles.gw_semigroup_max_abs_diff", semi, "<=", 1e-12);
  }
  {
    const std::size_t windows = scaled(c, 1000);
    const auto seed = part_seed(c, kTagDistance);
    auto kernel = [](std::uint64_t s, int) {
      Xoshiro256 fwd = substream(s, StreamTag::ContourForward);
      Xoshiro256 back = substream(s, StreamTag::ContourBackward);
      Xoshiro256 aux = substream(s, StreamTag::Auxiliary);
      const Index past = static_cast<Index>(aux.below(201));
      const auto p = gen_contour(past, 200 - past, fwd, back);
      const auto t = reconstruct_tree(p);
      std::uint64_t bad = 0;
      for (Index i = p.first(); i <= p.last(); ++i) {
        const auto bfs = oracle::bfs_distances(t, t.vertex_at(i));
        for (Index j = p.first(); j <= p.last(); ++j)
          bad += tree_distance(p, i, j) != bfs[static_cast<std::size_t>(t.vertex_at(j))];
      }
      return bad;
    };
    const auto out = run_replicas<std::uint64_t>(seed, windows, kernel, c.threads);
    std::uint64_t mismatches = 0;
    for (auto v : out) mismatches += v;
    b.row({"oracles.tree_distance", 0, 200, 0, "na", windows, seed}, "mismatches", static_cast<double>(mismatches));
    b.check("oracles.distance_mismatches", static_cast<double>(mismatches), "==", 0.0);
  }
  {
    const std::size_t windows = scaled(c, 200);
    const auto seed = part_seed(c, kTagXiOracle);
    auto kernel = [](std::uint64_t s, int) {
      const Index n = 20 + static_cast<Index>(mix64(s) % 481);
      const std::size_t dim = 1 + mix64(s + 1) % 4;
      const auto mode = mix64(s + 2) % 2 ? PastMode::Compressed : PastMode::Full;
      // An equivalence check, so windows whose full past overruns the cap are simply redrawn.
      std::optional<SnakeTrajectory> traj;
      for (std::uint64_t a = 0; !traj; ++a) {
        try {
          traj = gen_certified_snake(dim, n, 8, mode, mix64(s ^ (a * 0x9e3779b97f4a7c15ULL)), 64 * (n + 64));
        } catch (const CertificationError&) {
        }
      }
      std::array<std::uint64_t, 2> bad{0, 0};
      for (std::int64_t k : {0, 1, 2, 4, 8}) {
        const auto slow = oracle::xi_naive(*traj, k, 1, n);
        const auto fast = xi_k_all(*traj, k, n);
        const auto bfs = xi_k_range_bfs(*traj, k, 1, n);
        for (std::size_t t = 0; t < slow.size(); ++t) {
          bad[0] += fast.values[t] != slow[t];
          bad[1] += bfs.values[t] != slow[t];
        }
      }
      return bad;
    };
    const auto out = run_replicas<std::array<std::uint64_t, 2>>(seed, windows, kernel, c.threads);
    std::uint64_t kernel_bad = 0, bfs_bad = 0;
    for (const auto& v : out) {
      kernel_bad += v[0];
      bfs_bad += v[1];
    }
    const Builder::Scope s{"oracles.xi", 0, 500, 8, "auto", windows, seed};
    b.row(s, "kernel_mismatches", static_cast<double>(kernel_bad));
    b.row(s, "bfs_mismatches", static_cast<double>(bfs_bad));
    b.check("oracles.xi_kernel_mismatches", static_cast<double>(kernel_bad), "==", 0.0);
    b.check("oracles.xi_bfs_mismatches", static_cast<double>(bfs_bad), "==", 0.0);
  }
  {
    // Phi against tabulated values.
    const double e1 = std::abs(normal_cdf(1.959963984540054) - 0.975);
    const double e2 = std::abs(normal_cdf(-1.0) - 0.15865525393145707);
    double mom = 0.0;
    const double exact[4] = {0.0, 1.0, 0.0, 3.0};
    for (int o = 1; o <= 4; ++o) mom = std::max(mom, std::abs(gaussian_moment(o) - exact[o - 1]));
    b.row({"oracles.gaussian"}, "cdf_max_abs_err", std::max(e1, e2));
    b.row({"oracles.gaussian"}, "moment_max_abs_err", mom);
    b.check("oracles.gaussian_cdf_err", std::max(e1, e2), "<=", 1e-12);
  }
}

// ---------------------------------------------------------------- contour

void run_contour(const RunConfig& c, Builder& b) {
  const auto thr = c.threads;
  {
    const std::size_t R = scaled(c, 1e6);
    const auto seed = part_seed(c, kTagContourTwo);
    auto kernel = [](std::uint64_t s, int) {
      Xoshiro256 fwd = substream(s, StreamTag::ContourForward);
      Xoshiro256 back = substream(s, StreamTag::ContourBackward);
      return static_cast<std::uint8_t>(gen_contour(0, 2, fwd, back).value(2) == 0);
    };
    const auto out = run_replicas<std::uint8_t>(seed, R, kernel, thr);
    std::uint64_t zeros = 0;
    for (auto v : out) zeros += v;
    const double p = static_cast<double>(zeros) / static_cast<double>(R);
    const double se = std::sqrt(0.25 / static_cast<double>(R));
    b.row({"contour.two_step", 0, 2, 0, "0", R, seed}, "p_c2_zero", p, se);
    b.check("contour.p_c2_zero_z", std::abs(p - 0.5) / se, "<=", 4.0);
  }
  {
    const Index n = 64;
    const std::size_t R = scaled(c, 1e5);
    const auto seed = part_seed(c, kTagExcursion);
    auto kernel = [n](std::uint64_t s, int) {
      Xoshiro256 fwd = substream(s, StreamTag::ContourForward);
      Xoshiro256 back = substream(s, StreamTag::ContourBackward);
      return static_cast<std::int32_t>(excursion_statistic(gen_contour(0, n, fwd, back), n));
    };
    const auto out = run_replicas<std::int32_t>(seed, R, kernel, thr);
    // Only m with the parity of n carry mass.
    std::vector<std::uint64_t> obs(n / 2 + 1, 0);
    for (auto m : out) ++obs[static_cast<std::size_t>(m / 2)];
    std::vector<double> probs;
    for (Index m = 0; m <= n; m += 2) probs.push_back(excursion_pmf(n, m));
    const auto chi = chi_square_gof(obs, probs);
    const Builder::Scope s{"contour.excursion", 0, n, 0, "0", R, seed};
    b.row(s, "chi_square", chi.statistic);
    b.row(s, "chi_square_dof", chi.dof);
    b.row(s, "chi_square_p", chi.p_value);
    b.check("contour.excursion_chi_p", chi.p_value, ">=", 1e-3);
  }
  {
    // d = 1: up-step displacements are fair and independent of the previous up-step.
    const std::size_t R = scaled(c, 1e4);
    const auto seed = part_seed(c, kTagUpStep);
    using Counts = std::array<std::uint64_t, 6>;  // plus, total, then (prev, cur) = ++, +-, -+, --
    auto kernel = [](std::uint64_t s, int) {
      const auto traj = gen_snake(1, 8, 200, s);
      Counts ct{};
      int prev = 0;
      for (Index i = 1; i <= 200; ++i) {
        if (traj.path.increment(i) != 1) continue;
        const int step = traj.position_at(i)[0] - traj.position_at(i - 1)[0];
        ++ct[1];
        ct[0] += step == 1;
        if (prev != 0) ++ct[2 + (prev == 1 ? 0 : 2) + (step == 1 ? 0 : 1)];
        prev = step;
      }
      return ct;
    };
    const auto out = run_replicas<Counts>(seed, R, kernel, thr);
    std::uint64_t plus = 0, total = 0;
    std::array<std::uint64_t, 4> tab{};
    for (const auto& o : out) {
      plus += o[0];
      total += o[1];
      for (int q = 0; q < 4; ++q) tab[q] += o[2 + q];
    }
    const double p = static_cast<double>(plus) / static_cast<double>(total);
    const double se = std::sqrt(0.25 / static_cast<double>(total));
    const auto chi = chi_square_2x2(tab[0], tab[1], tab[2], tab[3]);
    const Builder::Scope s{"snake.up_step", 1, 200, 0, "8", R, seed};
    b.row(s, "up_steps", static_cast<double>(total));
    b.row(s, "p_plus", p, se);
    b.row(s, "independence_chi_p", chi.p_value);
    b.check("snake.up_step_z", std::abs(p - 0.5) / se, "<=", 4.0);
    b.check("snake.up_step_independence_p", chi.p_value, ">=", 1e-3);
  }
  {
    const std::size_t dim = 3;
    const std::size_t R = scaled(c, 2e4);
    const auto seed = part_seed(c, kTagShift);
    auto kernel = [dim](std::uint64_t s, int) {
      const auto traj = gen_snake(dim, 40, 40, s);
      Xoshiro256 aux = substream(s, StreamTag::Auxiliary);
      auto cell = [dim](const SnakeTrajectory& t) {
        const auto a = t.position_at(0);
        const auto z = t.position_at(1);
        for (std::size_t q = 0; q < dim; ++q)
          if (z[q] != a[q]) return static_cast<std::uint8_t>(2 * q + (z[q] > a[q] ? 0 : 1));
        return std::uint8_t{0};
      };
      const auto j = -static_cast<Index>(aux.below(40));
      return std::array<std::uint8_t, 2>{cell(traj), cell(shift_origin(traj, j))};
    };
    const auto out = run_replicas<std::array<std::uint8_t, 2>>(seed, R, kernel, thr);
    std::vector<std::uint64_t> orig(2 * dim, 0), shifted(2 * dim, 0);
    for (const auto& o : out) {
      ++orig[o[0]];
      ++shifted[o[1]];
    }
    const std::vector<double> uniform(2 * dim, 1.0 / (2.0 * static_cast<double>(dim)));
    const auto a = chi_square_gof(orig, uniform);
    const auto z = chi_square_gof(shifted, uniform);
    const Builder::Scope s{"snake.shift", dim, 40, 0, "40", R, seed};
    b.row(s, "unshifted_chi_p", a.p_value);
    b.row(s, "shifted_chi_p", z.p_value);
    b.check("snake.shift_chi_p", std::min(a.p_value, z.p_value), ">=", 1e-3);
  }
  {
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 4; k <= c.k; k *= 2) ks.push_back(k);
    if (ks.size() < 2) throw UsageError("contour: --k must be at least 8 for the ball-moment fit");
    const std::size_t R = scaled(c, 1e4);
    const auto seed = part_seed(c, kTagBall);
    const auto r = ball_moment_curve(ks, R, seed, thr);
    const Builder::Scope s{"range.ball_moments", 1, 0, 0, "auto", R, seed};
    for (std::size_t t = 0; t < ks.size(); ++t) {
      b.row_at(s, 0, ks[t], "m2_at_most", r.m2_at_most[t], r.se_at_most[t]);
      b.row_at(s, 0, ks[t], "m2_exact", r.m2_exact[t], r.se_exact[t]);
    }
    b.row(s, "slope_at_most", r.fit_at_most.slope, r.fit_at_most.slope_se);
    b.row(s, "slope_exact", r.fit_exact.slope, r.fit_exact.slope_se);
    b.check("range.ball_at_most_slope", r.fit_at_most.slope, "<=", 4.3);
    b.check("range.ball_exact_slope", r.fit_exact.slope, "<=", 2.3);
  }
  {
    const std::vector<std::int64_t> js{4, 8, 16, 32, 64, 128, 256};
    const std::int64_t factor = 4;
    const std::size_t R = scaled(c, 1e6);
    const auto seed = part_seed(c, kTagHitting);
    const auto r = hitting_curve(c.dim, js, factor, R, seed, thr);
    const Builder::Scope s{"range.hitting", c.dim, 0, factor, "na", R, seed};
    for (std::size_t t = 0; t < js.size(); ++t) b.row_at(s, js[t], factor, "p_hit", r.p[t], r.se[t]);
    b.row(s, "slope", r.fit.slope, r.fit.slope_se);
    const double d = static_cast<double>(c.dim);
    b.check("range.hitting_slope", r.fit.slope, "<=", -(d - 2.0) / 2.0 + 0.3);
  }
  {
    const Index n = c.n_grid.front();
    const Index past = c.past_auto ? 8 * n : c.past;
    const std::size_t R = scaled(c, 1e3);
    const auto seed = part_seed(c, kTagRangeConstant);
    const Index half = n / 2;
    auto kernel = [&](std::uint64_t s, int) {
      const auto traj = gen_snake(c.dim, past, n, s);
      const auto full = static_cast<double>(y_windowed(traj, n, past)) / static_cast<double>(n);
      const auto h = half > 0 ? static_cast<double>(y_windowed(traj, half, past / 2)) / static_cast<double>(half) : 0.0;
      return std::array<double, 2>{h, full};
    };
    const auto out = run_replicas<std::array<double, 2>>(seed, R, kernel, thr);
    std::vector<double> a, z;
    for (const auto& o : out) {
      a.push_back(o[0]);
      z.push_back(o[1]);
    }
    const auto sa = summarize(a);
    const auto sz = summarize(z);
    const Builder::Scope s{"range.c_d", c.dim, n, 0, std::to_string(past), R, seed};
    if (half > 0) {
      Builder::Scope h = s;
      h.n = half;
      h.M = std::to_string(past / 2);
      b.row(h, "y_windowed_over_n", sa.mean, sa.se_mean);
    }
    b.row(s, "y_windowed_over_n", sz.mean, sz.se_mean);
    b.check("range.c_d_lower_4se", sz.mean - 4.0 * sz.se_mean, ">", 0.0);
  }
}

// ---------------------------------------------------------------- variance family

struct SharedSums {
  std::optional<SumSamples> sums;
  std::uint64_t seed = 0;
};

const SumSamples& xi_sums(const RunConfig& c, SharedSums& cache) {
  if (!cache.sums) {
    cache.seed = part_seed(c, kTagXiSums);
    const PastSpec past{c.past_auto, c.past};
    cache.sums = simulate_xi_sums(c.dim, c.n_grid, static_cast<std::int32_t>(c.k), past, c.replicas, cache.seed,
                                  c.threads);
  }
  return *cache.sums;
}

Builder::Scope sums_scope(const RunConfig& c, const SharedSums& cache, std::string name) {
  return {std::move(name), c.dim, 0, c.k, past_label(c.past_auto, c.past), c.replicas, cache.seed};
}

void run_variance(const RunConfig& c, Builder& b, SharedSums& cache) {
  const auto& s = xi_sums(c, cache);
  const auto curve = variance_curve(s);
  const auto scope = sums_scope(c, cache, "variance");
  for (std::size_t g = 0; g < curve.size(); ++g) {
    const auto sum = summarize(s.by_n[g]);
    const double n = static_cast<double>(curve[g].n);
    b.row_at(scope, curve[g].n, c.k, "mean_over_n", sum.mean / n, sum.se_mean / n);
    b.row_at(scope, curve[g].n, c.k, "var_over_n", curve[g].value, curve[g].se);
  }
  const auto& last = curve.back();
  const double ratio = curve.size() >= 2 ? plateau_ratio(curve) : kNaN;
  b.row(scope, "plateau_ratio", ratio);
  b.row_at(scope, last.n, c.k, "kappa_hat", last.value, last.se);
  b.row_at(scope, last.n, c.k, "kappa_ci99_lo", last.value - 2.576 * last.se);
  b.row_at(scope, last.n, c.k, "kappa_ci99_hi", last.value + 2.576 * last.se);
  b.row(scope, "mean_back_len", s.mean_back_len);
  b.check("variance.plateau_ratio", ratio, "<=", 1.15);
  b.check("variance.kappa_ci99_lo", last.value - 2.576 * last.se, ">", 0.0);
}

void run_clt(const RunConfig& c, Builder& b, SharedSums& cache) {
  const auto& s = xi_sums(c, cache);
  const auto scope = sums_scope(c, cache, "clt");
  CltBattery last;
  for (std::size_t g = 0; g < s.grid.size(); ++g) {
    const auto t = clt_battery(s.by_n[g]);
    const Index n = s.grid[g];
    b.row_at(scope, n, c.k, "skewness", t.skewness);
    b.row_at(scope, n, c.k, "skewness_z", t.skewness_z);
    b.row_at(scope, n, c.k, "excess_kurtosis", t.excess_kurtosis);
    b.row_at(scope, n, c.k, "kurtosis_z", t.kurtosis_z);
    b.row_at(scope, n, c.k, "ks_distance", t.ks_distance);
    b.row_at(scope, n, c.k, "ks_p", t.ks_p);
    b.row_at(scope, n, c.k, "ad_statistic", t.ad_statistic);
    last = t;
  }
  b.check("clt.abs_skewness", std::abs(last.skewness), "<", 0.15);
  b.check("clt.abs_excess_kurtosis", std::abs(last.excess_kurtosis), "<", 0.3);
  b.check("clt.ks_distance", last.ks_distance, "<", 0.03);
}

void run_fourth(const RunConfig& c, Builder& b, SharedSums& cache) {
  const auto& s = xi_sums(c, cache);
  const auto curve = fourth_moment_curve(s);
  const auto scope = sums_scope(c, cache, "fourth-moment");
  std::vector<double> xs, ys;
  for (const auto& p : curve) {
    const double n = static_cast<double>(p.n);
    b.row_at(scope, p.n, c.k, "fourth_over_n2", p.value, p.se);
    xs.push_back(n);
    ys.push_back(p.value * n * n);
  }
  double slope = kNaN, slope_se = kNaN;
  if (xs.size() >= 2 && std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0.0; })) {
    const auto fit = loglog_fit(xs, ys);
    slope = fit.slope;
    slope_se = fit.slope_se;
  }
  b.row(scope, "slope", slope, slope_se);
  b.check("fourth-moment.slope", slope, "<=", 2.2);
}

// ---------------------------------------------------------------- covariance

void run_covariance(const RunConfig& c, Builder& b) {
  const Index max_lag = 256;
  const Index window = c.n_grid.front();
  std::vector<Index> grid;
  for (Index l = 4; l <= max_lag; l *= 2) grid.push_back(l);
  const auto seed = part_seed(c, kTagCovariance);
  const auto r = covariance_curve(c.dim, static_cast<std::int32_t>(c.k), max_lag, window, grid, 128, c.replicas,
                                  seed, c.threads);
  const Builder::Scope s{"covariance", c.dim, window, c.k, "auto", c.replicas, seed};
  for (std::size_t l = 0; l < r.lags.size(); ++l) b.row_at(s, r.lags[l], c.k, "cov", r.cov[l], r.se[l]);
  b.row(s, "fit_points", static_cast<double>(r.fit_lags.size()));
  b.row(s, "slope", r.fit.slope, r.fit.slope_se);
  b.row_at(s, r.partial_lo, c.k, "abs_cov_partial_sum", r.partial_lo_sum);
  b.row_at(s, r.partial_hi, c.k, "abs_cov_partial_sum", r.partial_hi_sum);
  b.row(s, "partial_sum_change", r.partial_change, r.partial_change_se);
  b.check("covariance.var_lag0_le_quarter", r.cov[0], "<=", 0.25);
  b.check("covariance.slope", r.fit.slope, "<=", -1.2);
  b.check("covariance.partial_sum_change_in_se", std::abs(r.partial_change) / r.partial_change_se, "<", 2.0);

  // The test needs 500 conditioning events, so small runs keep a floor.
  const std::size_t R = std::max<std::size_t>(scaled(c, 5000), 1000);
  const auto iseed = part_seed(c, kTagIndependence);
  const auto ind = independence_experiment(5, 2, 2, 6, 4096, R, iseed, c.threads);
  const Builder::Scope t{"covariance.independence", 5, 4096, 2, "auto", R, iseed};
  static const char* cells[4] = {"n11", "n10", "n01", "n00"};
  for (int q = 0; q < 4; ++q) b.row(t, cells[q], static_cast<double>(ind.table[q]));
  b.row(t, "dropped", static_cast<double>(ind.dropped));
  b.row(t, "chi_square", ind.chi.statistic);
  b.row(t, "chi_square_p", ind.chi.p_value);
  b.check("covariance.independence_p", ind.chi.p_value, ">=", 1e-3);
}

// ---------------------------------------------------------------- truncation

void run_truncation(const RunConfig& c, Builder& b) {
  std::vector<std::int64_t> ks;
  for (std::int64_t k : {2, 4, 8, 16})
    if (k < c.k) ks.push_back(k);
  if (ks.size() < 2) throw UsageError("truncation: --k must exceed 4");
  const Index window = c.n_grid.front();
  const auto seed = part_seed(c, kTagTruncation);
  const auto r = truncation_bias_curve(c.dim, ks, static_cast<std::int32_t>(c.k), window, c.replicas, seed,
                                       c.threads);
  const Builder::Scope s{"truncation", c.dim, window, c.k, "auto", c.replicas, seed};
  for (std::size_t t = 0; t < ks.size(); ++t) b.row_at(s, window, ks[t], "bias", r.bias[t], r.se[t]);
  b.row(s, "slope", r.fit.slope, r.fit.slope_se);
  double worst = 0.0;
  for (std::size_t t = 0; t < r.probe_index.size(); ++t) {
    b.row_at(s, r.probe_index[t], ks.back(), "xi_mean_at_index", r.probe_mean[t], r.probe_se[t]);
    for (std::size_t u = 0; u < t; ++u) {
      const double se = std::hypot(r.probe_se[t], r.probe_se[u]);
      worst = std::max(worst, std::abs(r.probe_mean[t] - r.probe_mean[u]) / se);
    }
  }
  b.row(s, "mean_back_len", r.mean_back_len);
  const double d = static_cast<double>(c.dim);
  b.check("truncation.slope", r.fit.slope, "<=", -(d - 4.0) / 2.0 + 0.5);
  b.check("truncation.translation_invariance_z", worst, "<=", 4.0);
}

// ---------------------------------------------------------------- badpoints

void run_badpoints(const RunConfig& c, Builder& b) {
  std::vector<std::size_t> dims{1, 2, 5};
  if (std::find(dims.begin(), dims.end(), c.dim) == dims.end()) dims.push_back(c.dim);
  const Index pairs = 1000;
  const std::size_t windows = scaled(c, 1000);
  for (std::size_t d : dims) {
    const auto seed = mix64(part_seed(c, kTagBadRate) + d);
    const auto r = bad_rate(d, pairs, windows, seed, c.threads);
    const double q = 1.0 / (8.0 * static_cast<double>(d));
    const Builder::Scope s{"badpoints.rate", d, 2 * pairs, 0, "0", windows, seed};
    for (const auto& cls : r.classes) {
      if (cls.trials == 0) continue;
      const double t = static_cast<double>(cls.trials);
      const double p = static_cast<double>(cls.bad) / t;
      const double se = std::sqrt(q * (1.0 - q) / t);
      b.row(s, "trials_" + cls.name, t);
      b.row(s, "rate_" + cls.name, p, se);
      b.check("badpoints.rate_z.d" + std::to_string(d) + "." + cls.name, std::abs(p - q) / se, "<=", 4.0);
    }
  }

  const Index n = c.n_grid.front();
  const Index past = c.past_auto ? n : c.past;
  const std::size_t gaps = static_cast<std::size_t>(std::min<Index>(100, n / 2 + 1));
  const auto seed = part_seed(c, kTagGapBattery);
  const auto g = bad_gap_battery(c.dim, n, past, gaps, c.replicas, seed, c.threads);
  const Builder::Scope s{"badpoints.gaps", c.dim, n, 0, std::to_string(past), c.replicas, seed};
  b.row(s, "identity_checks", static_cast<double>(g.identity_checks));
  b.row(s, "identity_violations", static_cast<double>(g.identity_violations));
  b.row(s, "tilde_bound_violations", static_cast<double>(g.tilde_bound_violations));
  b.row(s, "gap_draws", static_cast<double>(g.gap_draws));
  b.row(s, "geometric_q", g.q);
  for (std::size_t x = 0; x < g.gap_hist.size(); ++x)
    b.row(s, "gap_count_" + std::to_string(x), static_cast<double>(g.gap_hist[x]));
  b.row(s, "gap_chi_square", g.gap_chi.statistic);
  b.row(s, "gap_chi_square_dof", g.gap_chi.dof);
  b.row(s, "gap_chi_square_p", g.gap_chi.p_value);
  b.row(s, "mean_x0", g.mean_x0, g.mean_x0_se);
  b.row(s, "mean_x0_expected", 1.0 / (8.0 * static_cast<double>(c.dim) - 1.0));
  b.row(s, "corr_n_yhat", g.corr.r, g.corr.se);
  b.row(s, "median_table_p", g.median_table.p_value);
  b.row(s, "en_over_n", g.en_over_n, g.en_se);
  b.row(s, "varn_over_n", g.varn_over_n, g.varn_se);
  b.row(s, "lambda_stated", stated_lambda(c.dim));
  b.row(s, "sigma2_stated", stated_sigma2(c.dim));
  b.row(s, "lambda_geometric", derived_lambda(c.dim));
  b.row(s, "sigma2_geometric", derived_sigma2(c.dim));
  b.check("badpoints.identity_violations", static_cast<double>(g.identity_violations), "==", 0.0);
  b.check("badpoints.tilde_bound_violations", static_cast<double>(g.tilde_bound_violations), "==", 0.0);
  b.check("badpoints.gap_chi_p", g.gap_chi.p_value, ">=", 1e-3);
  b.check("badpoints.corr_in_se", std::abs(g.corr.r) / g.corr.se, "<=", 4.0);
  b.check("badpoints.median_table_p", g.median_table.p_value, ">=", 1e-3);
  b.check("badpoints.mean_x0_z",
          std::abs(g.mean_x0 - 1.0 / (8.0 * static_cast<double>(c.dim) - 1.0)) / g.mean_x0_se, "<=", 4.0);
}

void dispatch(const RunConfig& c, Builder& b, SharedSums& cache) {
  const auto& e = c.experiment;
  if (e == "oracles") run_oracles(c, b);
  else if (e == "contour") run_contour(c, b);
  else if (e == "variance") run_variance(c, b, cache);
  else if (e == "clt") run_clt(c, b, cache);
  else if (e == "fourth-moment") run_fourth(c, b, cache);
  else if (e == "covariance") run_covariance(c, b);
  else if (e == "truncation") run_truncation(c, b);
  else if (e == "badpoints") run_badpoints(c, b);
  else throw UsageError("unknown experiment '" + e + "'");
}

}  // namespace

std::size_t base_replicas(std::string_view experiment) { return defaults_for(experiment).replicas; }

RunConfig resolve_defaults(RunConfig c) {
  const auto& d = defaults_for(c.experiment);
  auto reject = [&](bool given, const char* flag) {
    if (given) throw UsageError(c.experiment + " does not take " + flag);
  };
  reject(!d.takes_dim && c.dim != 0, "--dim");
  reject(!d.takes_n && !c.n_grid.empty(), "--n/--n-grid");
  reject(!d.takes_k && c.k >= 0, "--k");
  reject(!d.takes_past && !c.past_auto, "--past");
  if (d.single_n && c.n_grid.size() > 1) throw UsageError(c.experiment + " takes a single --n");
  if (c.dim == 0) c.dim = d.dim;
  if (c.n_grid.empty()) c.n_grid = d.n_grid;
  if (c.k < 0) c.k = d.k;
  if (c.replicas == 0) c.replicas = d.replicas;
  if (c.past_auto) c.past = 0;
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  for (std::size_t g = 0; g < c.n_grid.size(); ++g) {
    if (c.n_grid[g] < 1) throw UsageError("n must be positive");
    if (g > 0 && c.n_grid[g] <= c.n_grid[g - 1]) throw UsageError("--n-grid must be strictly increasing");
  }
  if (c.past < 0) throw UsageError("--past must be nonnegative");
  if (c.experiment == "variance" || c.experiment == "clt" || c.experiment == "fourth-moment") {
    if (c.dim < 5) throw UsageError(c.experiment + " needs --dim >= 5");
  }
  if (c.out.empty()) c.out = "brw_" + c.experiment + "." + c.format;
  return c;
}

bool ExperimentReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult& ExperimentReport::check(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw ContractError("no check named " + std::string(name));
}

ExperimentReport run_experiment(const RunConfig& cfg) {
  const RunConfig c = resolve_defaults(cfg);
  ExperimentReport rep;
  rep.experiment = c.experiment;
  rep.config = c;
  Builder b(rep);
  if (c.experiment != "all") {
    SharedSums cache;
    dispatch(c, b, cache);
    return rep;
  }
  SharedSums cache;
  for (const auto& name : experiment_names()) {
    if (name == "all") continue;
    RunConfig sub;
    sub.experiment = name;
    sub.seed = c.seed;
    sub.threads = c.threads;
    const double f = static_cast<double>(c.replicas) / static_cast<double>(base_replicas("all"));
    sub.replicas = static_cast<std::size_t>(std::max(1.0, std::round(static_cast<double>(base_replicas(name)) * f)));
    dispatch(resolve_defaults(sub), b, cache);
  }
  return rep;
}

}  // namespace brw
