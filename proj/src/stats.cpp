#include "brw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "brw/analytic.hpp"
#include "brw/errors.hpp"

namespace brw {

void MomentAccumulator::add(double x) noexcept {
  MomentAccumulator one;
  one.n_ = 1;
  one.mean_ = x;
  one.min_ = one.max_ = x;
  merge(one);
}

void MomentAccumulator::merge(const MomentAccumulator& o) noexcept {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double delta = o.mean_ - mean_;
  const double d_n = delta / n;
  const double d_n2 = d_n * d_n;
  const double m2 = m2_ + o.m2_ + delta * d_n * na * nb;
  const double m3 = m3_ + o.m3_ + delta * d_n2 * na * nb * (na - nb) + 3.0 * d_n * (na * o.m2_ - nb * m2_);
  const double m4 = m4_ + o.m4_ + delta * d_n2 * d_n * na * nb * (na * na - na * nb + nb * nb) +
                    6.0 * d_n2 * (na * na * o.m2_ + nb * nb * m2_) + 4.0 * d_n * (na * o.m3_ - nb * m3_);
  mean_ += d_n * nb;
  m2_ = m2;
  m3_ = m3;
  m4_ = m4;
  n_ += o.n_;
  min_ = std::min(min_, o.min_);
  max_ = std::max(max_, o.max_);
}

double MomentAccumulator::variance() const noexcept {
  return n_ < 2 ? 0.0 : std::max(0.0, m2_) / static_cast<double>(n_ - 1);
}

double MomentAccumulator::central_moment(int order) const noexcept {
  if (n_ == 0) return 0.0;
  const double n = static_cast<double>(n_);
  switch (order) {
    case 1: return 0.0;
    case 2: return m2_ / n;
    case 3: return m3_ / n;
    case 4: return m4_ / n;
    default: return std::numeric_limits<double>::quiet_NaN();
  }
}

double MomentAccumulator::skewness() const noexcept {
  const double m2 = central_moment(2);
  return m2 > 0.0 ? central_moment(3) / std::pow(m2, 1.5) : 0.0;
}

double MomentAccumulator::excess_kurtosis() const noexcept {
  const double m2 = central_moment(2);
  return m2 > 0.0 ? central_moment(4) / (m2 * m2) - 3.0 : 0.0;
}

namespace {

struct Moments {
  double mean, var, skew, kurt, m4;
};

// Statistics of a sample given its size and power sums of (x - shift).
Moments from_power_sums(double n, double shift, double s1, double s2, double s3, double s4) {
  const double mu = s1 / n;  // mean of (x - shift)
  const double mu2 = mu * mu;
  const double c2 = s2 / n - mu2;
  const double c3 = s3 / n - 3.0 * mu * s2 / n + 2.0 * mu2 * mu;
  const double c4 = s4 / n - 4.0 * mu * s3 / n + 6.0 * mu2 * s2 / n - 3.0 * mu2 * mu2;
  Moments m{};
  m.mean = shift + mu;
  m.var = n > 1 ? std::max(0.0, c2) * n / (n - 1.0) : 0.0;
  m.skew = c2 > 0.0 ? c3 / std::pow(c2, 1.5) : 0.0;
  m.kurt = c2 > 0.0 ? c4 / (c2 * c2) - 3.0 : 0.0;
  m.m4 = c4;
  return m;
}

double jackknife_se(std::span<const double> loo, double n) {
  const double mean = std::accumulate(loo.begin(), loo.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  return std::sqrt((n - 1.0) / n * ss);
}

}  // namespace

SampleSummary summarize(std::span<const double> xs) {
  if (xs.size() < 2) throw InsufficientDataError("summary needs at least 2 samples");
  MomentAccumulator acc;
  for (double x : xs) acc.add(x);
  const double n = static_cast<double>(xs.size());
  const double shift = acc.mean();

  double s[5] = {0, 0, 0, 0, 0};
  for (double x : xs) {
    const double y = x - shift;
    const double y2 = y * y;
    s[1] += y;
    s[2] += y2;
    s[3] += y2 * y;
    s[4] += y2 * y2;
  }
  SampleSummary out;
  out.n_samples = xs.size();
  out.mean = acc.mean();
  out.variance = acc.variance();
  out.skewness = acc.skewness();
  out.excess_kurtosis = acc.excess_kurtosis();
  out.fourth_central = acc.central_moment(4);
  out.min = acc.min();
  out.max = acc.max();

  std::vector<double> lm(xs.size()), lv(xs.size()), ls(xs.size()), lk(xs.size()), l4(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double y = xs[i] - shift;
    const double y2 = y * y;
    const auto m = from_power_sums(n - 1.0, shift, s[1] - y, s[2] - y2, s[3] - y2 * y, s[4] - y2 * y2);
    lm[i] = m.mean;
    lv[i] = m.var;
    ls[i] = m.skew;
    lk[i] = m.kurt;
    l4[i] = m.m4;
  }
  out.se_mean = jackknife_se(lm, n);
  out.se_variance = jackknife_se(lv, n);
  out.se_skewness = jackknife_se(ls, n);
  out.se_kurtosis = jackknife_se(lk, n);
  out.se_fourth_central = jackknife_se(l4, n);
  return out;
}

LinearFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("ols: length mismatch");
  if (x.size() < 2) throw InsufficientDataError("ols needs at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw InsufficientDataError("ols needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.residuals.push_back(r);
    rss += r * r;
  }
  f.slope_se = x.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  return f;
}

LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("loglog_fit: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return ols(lx, ly);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("pearson: length mismatch");
  if (x.size() < 3) throw InsufficientDataError("correlation needs at least 3 pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) throw InsufficientDataError("correlation of a constant sample");
  Correlation c;
  c.r = sxy / std::sqrt(sxx * syy);
  c.se = std::sqrt(std::max(0.0, 1.0 - c.r * c.r) / (n - 2.0));
  return c;
}

double ks_distance_normal(std::span<const double> z) {
  if (z.empty()) throw InsufficientDataError("KS distance of an empty sample");
  std::vector<double> s(z.begin(), z.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  if (n == 0) throw InsufficientDataError("KS p-value needs samples");
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double anderson_darling_normal(std::span<const double> z) {
  if (z.empty()) throw InsufficientDataError("AD statistic of an empty sample");
  std::vector<double> s(z.begin(), z.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  const double eps = 1e-300;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = std::max(eps, normal_cdf(s[i]));
    const double hi = std::max(eps, 1.0 - normal_cdf(s[n - 1 - i]));
    acc += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  return -static_cast<double>(n) - acc / static_cast<double>(n);
}

CltBattery clt_battery(std::span<const double> samples) {
  if (samples.size() < 100) throw InsufficientDataError("CLT battery needs at least 100 samples");
  MomentAccumulator acc;
  for (double x : samples) acc.add(x);
  const double sd = std::sqrt(acc.variance());
  if (!(sd > 0.0)) throw InsufficientDataError("CLT battery on a sample with zero variance");
  std::vector<double> z;
  z.reserve(samples.size());
  for (double x : samples) z.push_back((x - acc.mean()) / sd);

  CltBattery b;
  b.n = samples.size();
  const double n = static_cast<double>(b.n);
  b.skewness = acc.skewness();
  b.excess_kurtosis = acc.excess_kurtosis();
  b.skewness_z = b.skewness / std::sqrt(6.0 / n);
  b.kurtosis_z = b.excess_kurtosis / std::sqrt(24.0 / n);
  b.ks_distance = ks_distance_normal(z);
  b.ks_p = ks_pvalue(b.ks_distance, b.n);
  b.ad_statistic = anderson_darling_normal(z);
  b.gaussian_compatible = std::abs(b.skewness_z) <= 4.0 && std::abs(b.kurtosis_z) <= 4.0 && b.ks_p >= 1e-3;
  return b;
}

double chi_square_sf(double x, double dof) {
  if (!(dof > 0.0)) throw DomainError("chi-square needs positive degrees of freedom");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probs,
                         double min_expected) {
  if (observed.size() != probs.size() || observed.empty()) throw ContractError("chi-square: length mismatch");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (total <= 0.0) throw InsufficientDataError("chi-square on zero observations");
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> ex;
  for (double p : probs) ex.push_back(p * total);
  // Mass outside the listed cells goes to the last one.
  const double listed = std::accumulate(probs.begin(), probs.end(), 0.0);
  ex.back() += std::max(0.0, 1.0 - listed) * total;
  while (ex.size() > 1 && ex.back() < min_expected) {
    const double e = ex.back();
    const double o = obs.back();
    ex.pop_back();
    obs.pop_back();
    ex.back() += e;
    obs.back() += o;
  }
  if (ex.size() < 2) throw InsufficientDataError("chi-square: fewer than 2 cells after pooling");
  ChiSquare c;
  c.cells = ex.size();
  for (std::size_t i = 0; i < ex.size(); ++i) {
    if (ex[i] <= 0.0) throw InsufficientDataError("chi-square: empty expected cell");
    c.statistic += (obs[i] - ex[i]) * (obs[i] - ex[i]) / ex[i];
  }
  c.dof = static_cast<double>(c.cells - 1);
  c.p_value = chi_square_sf(c.statistic, c.dof);
  return c;
}

ChiSquare chi_square_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d, double min_expected) {
  const double A = static_cast<double>(a), B = static_cast<double>(b);
  const double C = static_cast<double>(c), D = static_cast<double>(d);
  const double n = A + B + C + D;
  const double r1 = A + B, r2 = C + D, c1 = A + C, c2 = B + D;
  if (n <= 0.0) throw InsufficientDataError("2x2 table is empty");
  const double e[4] = {r1 * c1 / n, r1 * c2 / n, r2 * c1 / n, r2 * c2 / n};
  for (double v : e)
    if (v < min_expected) throw InsufficientDataError("2x2 table has a sparse expected cell");
  const double o[4] = {A, B, C, D};
  ChiSquare res;
  for (int i = 0; i < 4; ++i) res.statistic += (o[i] - e[i]) * (o[i] - e[i]) / e[i];
  res.dof = 1.0;
  res.cells = 4;
  res.p_value = chi_square_sf(res.statistic, 1.0);
  return res;
}

}  // namespace brw
