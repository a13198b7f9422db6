#include "brw/mcstats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "brw/badpoints.hpp"
#include "brw/errors.hpp"
#include "brw/lattice.hpp"
#include "brw/replicas.hpp"

namespace brw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Generous cap on the compressed past: reaching depth k+1 under the height
// cap takes about 3(k+1)^2 steps, certifying [0, n] adds about n.
Index max_back_for(Index n, std::int32_t k, int attempt) {
  const Index depth = static_cast<Index>(k) + 1;
  return (64 * std::max<Index>({n, depth * depth, 64})) << attempt;
}

SnakeTrajectory certified(std::size_t dim, Index n, std::int32_t k, std::uint64_t seed, int attempt) {
  SnakeStreams streams(seed);
  return gen_certified_snake(dim, n, k, PastMode::Compressed, streams, max_back_for(n, k, attempt));
}

LinearFit nan_fit() {
  LinearFit f;
  f.slope = f.intercept = f.slope_se = kNaN;
  return f;
}

double jackknife_spread(std::span<const double> loo) {
  const double n = static_cast<double>(loo.size());
  const double mean = std::accumulate(loo.begin(), loo.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return std::sqrt((n - 1.0) / n * ss);
}

// Proportion estimate and its binomial standard error.
std::pair<double, double> proportion(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) return {kNaN, kNaN};
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

}  // namespace

SumSamples simulate_xi_sums(std::size_t dim, std::span<const Index> grid, std::int32_t k, PastSpec past,
                            std::size_t replicas, std::uint64_t seed, int threads) {
  if (grid.empty()) throw ContractError("empty n grid");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() < 1) throw ContractError("n grid must be increasing and positive");
  const Index n_max = grid.back();
  struct Out {
    std::vector<double> sums;
    double back = 0.0;
  };
  auto kernel = [&](std::uint64_t s, int attempt) {
    SnakeTrajectory traj;
    if (past.automatic) {
      traj = certified(dim, n_max, k, s, attempt);
    } else {
      SnakeStreams streams(s);
      traj = gen_snake(dim, past.length << (4 * attempt), n_max, streams);
    }
    const auto xi = xi_k_all(traj, k, n_max);
    Out o;
    std::int64_t acc = 0;
    std::size_t g = 0;
    for (Index i = 1; i <= n_max; ++i) {
      acc += xi.values[static_cast<std::size_t>(i - 1)];
      while (g < grid.size() && grid[g] == i) {
        o.sums.push_back(static_cast<double>(acc));
        ++g;
      }
    }
    o.back = static_cast<double>(traj.path.back_len());
    return o;
  };
  const auto outs = run_replicas<Out>(seed, replicas, kernel, threads);
  SumSamples s;
  s.dim = dim;
  s.k = k;
  s.grid.assign(grid.begin(), grid.end());
  s.by_n.assign(grid.size(), std::vector<double>(replicas));
  double back = 0.0;
  for (std::size_t r = 0; r < replicas; ++r) {
    for (std::size_t g = 0; g < grid.size(); ++g) s.by_n[g][r] = outs[r].sums[g];
    back += outs[r].back;
  }
  s.mean_back_len = back / static_cast<double>(replicas);
  return s;
}

std::vector<CurvePoint> variance_curve(const SumSamples& s) {
  std::vector<CurvePoint> out;
  for (std::size_t g = 0; g < s.grid.size(); ++g) {
    const auto sum = summarize(s.by_n[g]);
    const double n = static_cast<double>(s.grid[g]);
    out.push_back({s.grid[g], sum.variance / n, sum.se_variance / n});
  }
  return out;
}

std::vector<CurvePoint> fourth_moment_curve(const SumSamples& s) {
  std::vector<CurvePoint> out;
  for (std::size_t g = 0; g < s.grid.size(); ++g) {
    const auto sum = summarize(s.by_n[g]);
    const double n = static_cast<double>(s.grid[g]);
    out.push_back({s.grid[g], sum.fourth_central / (n * n), sum.se_fourth_central / (n * n)});
  }
  return out;
}

double plateau_ratio(std::span<const CurvePoint> curve) {
  if (curve.size() < 2) throw InsufficientDataError("plateau ratio needs two grid points");
  double worst = 1.0;
  for (std::size_t g = 1; g < curve.size(); ++g) {
    const double a = curve[g - 1].value;
    const double b = curve[g].value;
    if (!(a > 0.0) || !(b > 0.0)) return std::numeric_limits<double>::infinity();
    worst = std::max({worst, a / b, b / a});
  }
  return worst;
}

CovarianceResult covariance_curve(std::size_t dim, std::int32_t k, Index max_lag, Index window,
                                  std::span<const Index> grid_lags, Index partial_lo, std::size_t replicas,
                                  std::uint64_t seed, int threads) {
  if (max_lag < 1 || window < 1) throw ContractError("covariance needs positive lag range and window");
  if (partial_lo < 1 || partial_lo >= max_lag) throw ContractError("partial-sum split must lie inside the lag range");
  if (replicas < 3) throw InsufficientDataError("covariance needs at least 3 replicas");
  const Index span_len = window + max_lag;
  const auto lags = static_cast<std::size_t>(max_lag) + 1;
  struct Out {
    std::uint32_t ones = 0;
    std::vector<std::uint32_t> prod;
  };
  auto kernel = [&](std::uint64_t s, int attempt) {
    const auto traj = certified(dim, span_len, k, s, attempt);
    const auto xi = xi_k_all(traj, k, span_len);
    // Bit p holds xi_{p+1}; 64 spare zero bits make shifted reads branch-free.
    std::vector<std::uint64_t> bits(static_cast<std::size_t>(span_len) / 64 + 3, 0);
    for (std::size_t p = 0; p < xi.values.size(); ++p)
      if (xi.values[p]) bits[p >> 6] |= std::uint64_t{1} << (p & 63);
    auto word_at = [&](std::size_t bit) {
      const std::size_t w = bit >> 6;
      const unsigned off = bit & 63;
      return off == 0 ? bits[w] : (bits[w] >> off) | (bits[w + 1] << (64 - off));
    };
    const auto W = static_cast<std::size_t>(window);
    Out o;
    o.prod.resize(lags);
    for (std::size_t lag = 0; lag < lags; ++lag) {
      std::uint32_t c = 0;
      for (std::size_t p = 0; p < W; p += 64) {
        std::uint64_t x = bits[p >> 6] & word_at(p + lag);
        if (W - p < 64) x &= (std::uint64_t{1} << (W - p)) - 1;
        c += static_cast<std::uint32_t>(std::popcount(x));
      }
      o.prod[lag] = c;
    }
    o.ones = o.prod[0];
    return o;
  };
  const auto outs = run_replicas<Out>(seed, replicas, kernel, threads);

  const double R = static_cast<double>(replicas);
  const double W = static_cast<double>(window);
  double A = 0.0;
  std::vector<double> B(lags, 0.0);
  for (const auto& o : outs) {
    A += o.ones;
    for (std::size_t l = 0; l < lags; ++l) B[l] += o.prod[l];
  }
  CovarianceResult res;
  res.replicas = replicas;
  res.window = window;
  res.partial_lo = partial_lo;
  res.partial_hi = max_lag;
  const double mu = A / (R * W);
  for (std::size_t l = 0; l < lags; ++l) {
    res.lags.push_back(static_cast<Index>(l));
    res.cov.push_back(B[l] / (R * W) - mu * mu);
  }
  auto partial = [&](const std::vector<double>& cov, Index upto) {
    double s = 0.0;
    for (Index l = 1; l <= upto; ++l) s += std::abs(cov[static_cast<std::size_t>(l)]);
    return s;
  };
  res.partial_lo_sum = partial(res.cov, partial_lo);
  res.partial_hi_sum = partial(res.cov, max_lag);
  res.partial_change = res.partial_hi_sum - res.partial_lo_sum;

  // Delete-one jackknife over replicas.
  std::vector<std::vector<double>> loo_cov(lags, std::vector<double>(replicas));
  std::vector<double> loo_change(replicas);
  std::vector<double> cov_r(lags);
  for (std::size_t r = 0; r < replicas; ++r) {
    const double mu_r = (A - outs[r].ones) / ((R - 1.0) * W);
    for (std::size_t l = 0; l < lags; ++l) {
      cov_r[l] = (B[l] - outs[r].prod[l]) / ((R - 1.0) * W) - mu_r * mu_r;
      loo_cov[l][r] = cov_r[l];
    }
    loo_change[r] = partial(cov_r, max_lag) - partial(cov_r, partial_lo);
  }
  for (std::size_t l = 0; l < lags; ++l) res.se.push_back(jackknife_spread(loo_cov[l]));
  res.partial_change_se = jackknife_spread(loo_change);

  std::vector<double> fx, fy;
  for (Index lag : grid_lags) {
    if (lag < 1 || lag > max_lag) throw ContractError("fit lag outside the lag range");
    const auto l = static_cast<std::size_t>(lag);
    if (res.cov[l] > 2.0 * res.se[l]) {
      res.fit_lags.push_back(lag);
      fx.push_back(static_cast<double>(lag));
      fy.push_back(res.cov[l]);
    }
  }
  res.fit = fx.size() >= 3 ? loglog_fit(fx, fy) : nan_fit();
  return res;
}

ChiSquare independence_test(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw ContractError("independence test: length mismatch");
  std::uint64_t t[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) ++t[(a[i] ? 0 : 2) + (b[i] ? 0 : 1)];
  return chi_square_2x2(t[0], t[1], t[2], t[3]);
}

IndependenceResult independence_experiment(std::size_t dim, std::int32_t k1, std::int32_t k2, std::int32_t m,
                                           Index window, std::size_t replicas, std::uint64_t seed, int threads) {
  if (m < k1 + k2) throw ContractError("distance m must be at least k1 + k2");
  struct Out {
    std::uint8_t found = 0, a = 0, b = 0;
  };
  auto kernel = [&](std::uint64_t s, int attempt) {
    const auto traj = certified(dim, window, std::max(k1, k2), s, attempt);
    Out o;
    for (Index j = 1; j <= window; ++j) {
      if (tree_distance_unchecked(traj.path, 0, j) != m) continue;
      o.found = 1;
      o.a = xi_k_range(traj, k1, 0, 0).values[0];
      o.b = xi_k_range(traj, k2, j, j).values[0];
      break;
    }
    return o;
  };
  const auto outs = run_replicas<Out>(seed, replicas, kernel, threads);
  IndependenceResult res;
  std::vector<std::uint8_t> a, b;
  for (const auto& o : outs) {
    if (!o.found) {
      ++res.dropped;
      continue;
    }
    a.push_back(o.a);
    b.push_back(o.b);
    ++res.table[(o.a ? 0 : 2) + (o.b ? 0 : 1)];
  }
  res.used = a.size();
  if (res.used < 500) throw InsufficientDataError("conditioning event observed fewer than 500 times");
  res.chi = independence_test(a, b);
  return res;
}

TruncationResult truncation_bias_curve(std::size_t dim, std::span<const std::int64_t> ks, std::int32_t k_max,
                                       Index window, std::size_t replicas, std::uint64_t seed, int threads) {
  if (ks.empty()) throw ContractError("empty k list");
  for (auto k : ks)
    if (k < 0 || k >= k_max) throw ContractError("every k must lie in [0, k_max)");
  const Index probes[3] = {1, std::max<Index>(1, window / 2), window};
  const std::int64_t k_probe = ks.back();
  auto kernel = [&](std::uint64_t s, int attempt) {
    const auto traj = certified(dim, window, k_max, s, attempt);
    const auto D = revisit_distances(traj, 1, window);
    std::vector<double> o;
    for (auto k : ks) {
      std::size_t c = 0;
      for (auto d : D) c += d > k && d <= k_max;
      o.push_back(static_cast<double>(c) / static_cast<double>(window));
    }
    for (Index i : probes) o.push_back(D[static_cast<std::size_t>(i - 1)] > k_probe ? 1.0 : 0.0);
    o.push_back(static_cast<double>(traj.path.back_len()));
    return o;
  };
  const auto outs = run_replicas<std::vector<double>>(seed, replicas, kernel, threads);
  TruncationResult res;
  res.ks.assign(ks.begin(), ks.end());
  res.k_max = k_max;
  std::vector<double> col(replicas);
  auto column = [&](std::size_t c) {
    for (std::size_t r = 0; r < replicas; ++r) col[r] = outs[r][c];
    return summarize(col);
  };
  for (std::size_t t = 0; t < ks.size(); ++t) {
    const auto s = column(t);
    res.bias.push_back(s.mean);
    res.se.push_back(s.se_mean);
  }
  for (std::size_t t = 0; t < 3; ++t) {
    const auto s = column(ks.size() + t);
    res.probe_index.push_back(probes[t]);
    res.probe_mean.push_back(s.mean);
    res.probe_se.push_back(s.se_mean);
  }
  res.mean_back_len = column(ks.size() + 3).mean;
  std::vector<double> kx(ks.begin(), ks.end());
  const bool positive = std::all_of(res.bias.begin(), res.bias.end(), [](double b) { return b > 0.0; });
  res.fit = positive && kx.size() >= 2 ? loglog_fit(kx, res.bias) : nan_fit();
  return res;
}

HittingResult hitting_curve(std::size_t dim, std::span<const std::int64_t> js, std::int64_t generation_factor,
                            std::size_t replicas, std::uint64_t seed, int threads) {
  if (js.empty()) throw ContractError("empty j list");
  if (generation_factor < 1) throw ContractError("generation factor must be at least 1");
  auto kernel = [&](std::uint64_t s, int) {
    std::vector<std::uint8_t> hits;
    for (auto j : js) {
      auto rng = substream(s ^ mix64(static_cast<std::uint64_t>(j)), StreamTag::Auxiliary);
      hits.push_back(left_subtree_hits_origin(dim, j, generation_factor * j, rng) ? 1 : 0);
    }
    return hits;
  };
  const auto outs = run_replicas<std::vector<std::uint8_t>>(seed, replicas, kernel, threads);
  HittingResult res;
  res.js.assign(js.begin(), js.end());
  res.generation_factor = generation_factor;
  for (std::size_t t = 0; t < js.size(); ++t) {
    std::uint64_t h = 0;
    for (const auto& o : outs) h += o[t];
    const auto [p, se] = proportion(h, replicas);
    res.p.push_back(p);
    res.se.push_back(se);
  }
  std::vector<double> jx(js.begin(), js.end());
  const bool positive = std::all_of(res.p.begin(), res.p.end(), [](double p) { return p > 0.0; });
  res.fit = positive && jx.size() >= 2 ? loglog_fit(jx, res.p) : nan_fit();
  return res;
}

BallMomentResult ball_moment_curve(std::span<const std::int64_t> ks, std::size_t replicas, std::uint64_t seed,
                                   int threads) {
  if (ks.empty()) throw ContractError("empty k list");
  const auto k_max = static_cast<std::int32_t>(*std::max_element(ks.begin(), ks.end()));
  auto kernel = [&](std::uint64_t s, int attempt) {
    // Contour-only quantity: the spatial part is irrelevant, so d = 1.
    const auto traj = certified(1, 0, k_max, s, attempt);
    std::vector<double> o;
    for (auto k : ks) {
      const auto a = static_cast<double>(ball_count(traj, 0, k, BallMode::AtMost));
      const auto e = static_cast<double>(ball_count(traj, 0, k, BallMode::Exactly));
      o.push_back(a * a);
      o.push_back(e * e);
    }
    return o;
  };
  const auto outs = run_replicas<std::vector<double>>(seed, replicas, kernel, threads);
  BallMomentResult res;
  res.ks.assign(ks.begin(), ks.end());
  std::vector<double> col(replicas);
  for (std::size_t t = 0; t < ks.size(); ++t) {
    for (int which = 0; which < 2; ++which) {
      for (std::size_t r = 0; r < replicas; ++r) col[r] = outs[r][2 * t + static_cast<std::size_t>(which)];
      const auto s = summarize(col);
      (which == 0 ? res.m2_at_most : res.m2_exact).push_back(s.mean);
      (which == 0 ? res.se_at_most : res.se_exact).push_back(s.se_mean);
    }
  }
  std::vector<double> kx(ks.begin(), ks.end());
  res.fit_at_most = loglog_fit(kx, res.m2_at_most);
  res.fit_exact = loglog_fit(kx, res.m2_exact);
  return res;
}

BadRateResult bad_rate(std::size_t dim, Index pairs, std::size_t windows, std::uint64_t seed, int threads) {
  if (pairs < 1) throw ContractError("need at least one pair per window");
  static const std::array<const char*, 6> names = {"all", "root", "spine", "ordinary", "after_bad", "after_good"};
  using Counts = std::array<std::uint64_t, 12>;  // (trials, bad) per class
  auto kernel = [&](std::uint64_t s, int) {
    SnakeStreams streams(s);
    const auto traj = gen_snake(dim, 0, 2 * pairs, streams);
    Counts c{};
    bool prev_bad = false;
    for (Index i = 1; i <= pairs; ++i) {
      const Index idx = 2 * i - 1;
      const bool bad = is_bad(traj, idx);
      const std::int32_t level = traj.tree.spine_level[static_cast<std::size_t>(traj.tree.vertex_at(idx - 1))];
      const std::size_t where = level == 0 ? 1 : level > 0 ? 2 : 3;
      for (std::size_t cls : {std::size_t{0}, where, std::size_t{prev_bad ? 4u : 5u}}) {
        ++c[2 * cls];
        c[2 * cls + 1] += bad;
      }
      prev_bad = bad;
    }
    return c;
  };
  const auto outs = run_replicas<Counts>(seed, windows, kernel, threads);
  BadRateResult res;
  res.dim = dim;
  for (std::size_t cls = 0; cls < names.size(); ++cls) {
    BadRateClass c;
    c.name = names[cls];
    for (const auto& o : outs) {
      c.trials += o[2 * cls];
      c.bad += o[2 * cls + 1];
    }
    res.classes.push_back(c);
  }
  return res;
}

GapBattery bad_gap_battery(std::size_t dim, Index n, Index past, std::size_t gaps_per_replica, std::size_t replicas,
                           std::uint64_t seed, int threads) {
  if (n < 2 || past < 0) throw ContractError("bad-gap battery needs n >= 2 and past >= 0");
  if (gaps_per_replica < 1 || static_cast<Index>(gaps_per_replica) > n / 2 + 1)
    throw ContractError("gaps_per_replica must lie in [1, n/2 + 1]");
  struct Out {
    std::vector<std::uint32_t> gaps;
    double N = 0.0, yhat = 0.0, x0 = 0.0;
    std::uint32_t checks = 0, violations = 0, bound_violation = 0;
  };
  auto kernel = [&](std::uint64_t s, int attempt) {
    SnakeStreams streams(s);
    const Index len = overgenerated_length(n, dim) << attempt;
    auto traj = std::make_shared<const SnakeTrajectory>(gen_snake(dim, past, len, streams));
    const auto pr = prune(traj, n);
    Out o;
    for (std::size_t j = 0; j < gaps_per_replica; ++j) o.gaps.push_back(static_cast<std::uint32_t>(pr.gaps[j]));
    o.N = static_cast<double>(pr.N(n));
    o.x0 = static_cast<double>(pr.gaps[0]);

    // Running counts of both sides of the identity.
    auto excluded = [&] {
      RangeLedger l(dim);
      l.insert(traj->phantom.view());
      for (Index i = -past; i <= 0; ++i) l.insert(traj->position_at(i));
      return l;
    };
    const Index top = n + 2 * pr.N(n);
    std::vector<std::uint32_t> tilde(static_cast<std::size_t>(top) + 1, 0);
    auto lt = excluded();
    for (Index t = 1; t <= top; ++t) tilde[static_cast<std::size_t>(t)] = tilde[static_cast<std::size_t>(t - 1)] + lt.insert(traj->position_at(t));
    auto lh = excluded();
    std::uint32_t hat = 0;
    for (Index m = 0; m <= n; ++m) {
      if (m > 0) hat += lh.insert(traj->position_at(pr.kept[static_cast<std::size_t>(m)]));
      ++o.checks;
      o.violations += tilde[static_cast<std::size_t>(m + 2 * pr.N(m))] != hat;
    }
    o.yhat = hat;
    const auto yw = y_windowed(*traj, n, past);
    const auto yt = tilde[static_cast<std::size_t>(n)];
    o.bound_violation = !(yt <= yw && yw - yt <= 1);
    return o;
  };
  const auto outs = run_replicas<Out>(seed, replicas, kernel, threads);

  GapBattery g;
  g.dim = dim;
  g.n = n;
  g.past = past;
  g.q = 1.0 / (8.0 * static_cast<double>(dim));
  std::vector<double> Ns, Ys, X0;
  for (const auto& o : outs) {
    for (auto x : o.gaps) {
      if (x >= g.gap_hist.size()) g.gap_hist.resize(x + 1, 0);
      ++g.gap_hist[x];
      ++g.gap_draws;
    }
    Ns.push_back(o.N);
    Ys.push_back(o.yhat);
    X0.push_back(o.x0);
    g.identity_checks += o.checks;
    g.identity_violations += o.violations;
    g.tilde_bound_violations += o.bound_violation;
  }
  std::vector<double> probs;
  for (std::size_t x = 0; x < g.gap_hist.size(); ++x) probs.push_back((1.0 - g.q) * std::pow(g.q, static_cast<double>(x)));
  std::vector<std::uint64_t> obs = g.gap_hist;
  if (obs.size() == 1) {  // only zeros seen: keep a cell for the tail
    obs.push_back(0);
    probs.push_back((1.0 - g.q) * g.q);
  }
  g.gap_chi = chi_square_gof(obs, probs);

  const auto sx = summarize(X0);
  g.mean_x0 = sx.mean;
  g.mean_x0_se = sx.se_mean;
  g.corr = pearson(Ns, Ys);
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  const double mN = median(Ns);
  const double mY = median(Ys);
  std::vector<std::uint8_t> a, b;
  for (std::size_t r = 0; r < Ns.size(); ++r) {
    a.push_back(Ns[r] > mN);
    b.push_back(Ys[r] > mY);
  }
  g.median_table = independence_test(a, b);
  const auto sn = summarize(Ns);
  const double nn = static_cast<double>(n);
  g.en_over_n = sn.mean / nn;
  g.en_se = sn.se_mean / nn;
  g.varn_over_n = sn.variance / nn;
  g.varn_se = sn.se_variance / nn;
  return g;
}

double stated_lambda(std::size_t dim) { return 1.0 / (2.0 * (8.0 * static_cast<double>(dim) - 1.0)); }
double stated_sigma2(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return 32.0 * d * d - 4.0 * d;
}
double derived_lambda(std::size_t dim) { return 1.0 / (2.0 * (8.0 * static_cast<double>(dim) - 1.0)); }
double derived_sigma2(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return 4.0 * d / ((8.0 * d - 1.0) * (8.0 * d - 1.0));
}

}  // namespace brw
