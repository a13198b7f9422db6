#pragma once

// Simulation kernels and the curve estimators built on them. Each kernel is a
// deterministic function of (parameters, seed); replicas run through
// run_replicas and every reduction happens serially in replica order.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "brw/range.hpp"
#include "brw/stats.hpp"

namespace brw {

/// Past window policy: certified compressed past grown until the rule holds,
/// or a fixed full past of `length` steps (16 times longer on the retry).
struct PastSpec {
  bool automatic = true;
  Index length = 0;
};

struct CurvePoint {
  Index n = 0;
  double value = 0.0;
  double se = 0.0;
};

/// Per-replica sums S_n = xi_1^k + ... + xi_n^k for every n of the grid.
struct SumSamples {
  std::size_t dim = 0;
  std::int64_t k = 0;
  std::vector<Index> grid;
  std::vector<std::vector<double>> by_n;  ///< by_n[g][r]
  double mean_back_len = 0.0;
};

SumSamples simulate_xi_sums(std::size_t dim, std::span<const Index> grid, std::int32_t k, PastSpec past,
                            std::size_t replicas, std::uint64_t seed, int threads);

/// Var(S_n)/n per grid point with jackknife SE.
std::vector<CurvePoint> variance_curve(const SumSamples& s);
/// E<S_n>^4 / n^2 per grid point with jackknife SE.
std::vector<CurvePoint> fourth_moment_curve(const SumSamples& s);
/// Largest ratio max(a/b, b/a) between consecutive curve values.
double plateau_ratio(std::span<const CurvePoint> curve);

struct CovarianceResult {
  std::vector<Index> lags;     ///< 0 .. max_lag
  std::vector<double> cov;     ///< plug-in Cov(xi_0, xi_lag)
  std::vector<double> se;      ///< jackknife over replicas
  std::vector<Index> fit_lags; ///< grid lags with cov > 2 se used in the fit
  LinearFit fit;               ///< log |cov| on log lag; slope NaN if fewer than 3 lags
  Index partial_lo = 0;
  Index partial_hi = 0;
  double partial_lo_sum = 0.0;  ///< sum_{1 <= lag <= partial_lo} |cov|
  double partial_hi_sum = 0.0;
  double partial_change = 0.0;
  double partial_change_se = 0.0;
  std::size_t replicas = 0;
  Index window = 0;
};

CovarianceResult covariance_curve(std::size_t dim, std::int32_t k, Index max_lag, Index window,
                                  std::span<const Index> grid_lags, Index partial_lo, std::size_t replicas,
                                  std::uint64_t seed, int threads);

/// 2x2 Pearson test of two 0/1 samples.
ChiSquare independence_test(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

struct IndependenceResult {
  std::uint64_t table[4] = {0, 0, 0, 0};  ///< (a,b) = (1,1), (1,0), (0,1), (0,0)
  ChiSquare chi;
  std::size_t used = 0;
  std::size_t dropped = 0;  ///< replicas without an index at distance m
};

/// xi_0^{k1} against xi_J^{k2}, J the first j >= 1 with d(u_0, u_j) = m, within `window` steps.
IndependenceResult independence_experiment(std::size_t dim, std::int32_t k1, std::int32_t k2, std::int32_t m,
                                           Index window, std::size_t replicas, std::uint64_t seed, int threads);

struct TruncationResult {
  std::vector<std::int64_t> ks;
  std::int64_t k_max = 0;
  std::vector<double> bias;  ///< E[xi^k - xi^{k_max}]
  std::vector<double> se;
  LinearFit fit;
  std::vector<Index> probe_index;  ///< translation-invariance probes
  std::vector<double> probe_mean;  ///< E[xi_i^{ks.back()}]
  std::vector<double> probe_se;
  double mean_back_len = 0.0;
};

TruncationResult truncation_bias_curve(std::size_t dim, std::span<const std::int64_t> ks, std::int32_t k_max,
                                       Index window, std::size_t replicas, std::uint64_t seed, int threads);

struct HittingResult {
  std::vector<std::int64_t> js;
  std::vector<double> p;
  std::vector<double> se;
  LinearFit fit;
  std::int64_t generation_factor = 0;
};

/// P(0 in V(T_j^-)) with generation cap generation_factor * j.
HittingResult hitting_curve(std::size_t dim, std::span<const std::int64_t> js, std::int64_t generation_factor,
                            std::size_t replicas, std::uint64_t seed, int threads);

struct BallMomentResult {
  std::vector<std::int64_t> ks;
  std::vector<double> m2_at_most, se_at_most;
  std::vector<double> m2_exact, se_exact;
  LinearFit fit_at_most;
  LinearFit fit_exact;
};

/// Second moments of ball_count(., 0, k, <=) and (., 0, k, =).
BallMomentResult ball_moment_curve(std::span<const std::int64_t> ks, std::size_t replicas, std::uint64_t seed,
                                   int threads);

struct BadRateClass {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t bad = 0;
};

struct BadRateResult {
  std::size_t dim = 0;
  std::vector<BadRateClass> classes;  ///< "all" first
};

/// is_bad frequencies over `windows` forward windows of `pairs` pairs each,
/// overall and split by the state of u_{2i-2} and the previous pair.
BadRateResult bad_rate(std::size_t dim, Index pairs, std::size_t windows, std::uint64_t seed, int threads);

struct GapBattery {
  std::size_t dim = 0;
  Index n = 0;
  Index past = 0;
  double q = 0.0;
  std::vector<std::uint64_t> gap_hist;  ///< counts of X = 0, 1, ...
  std::uint64_t gap_draws = 0;
  ChiSquare gap_chi;
  double mean_x0 = 0.0, mean_x0_se = 0.0;
  Correlation corr;
  ChiSquare median_table;
  double en_over_n = 0.0, en_se = 0.0;
  double varn_over_n = 0.0, varn_se = 0.0;
  std::uint64_t identity_checks = 0;
  std::uint64_t identity_violations = 0;
  std::uint64_t tilde_bound_violations = 0;
};

GapBattery bad_gap_battery(std::size_t dim, Index n, Index past, std::size_t gaps_per_replica, std::size_t replicas,
                           std::uint64_t seed, int threads);

/// Rate constants quoted for the gap sum, and the ones implied by the geometric law.
double stated_lambda(std::size_t dim);
double stated_sigma2(std::size_t dim);
double derived_lambda(std::size_t dim);
double derived_sigma2(std::size_t dim);

}  // namespace brw
