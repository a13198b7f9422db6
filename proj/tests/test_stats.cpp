#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "brw/errors.hpp"
#include "brw/mcstats.hpp"
#include "brw/stats.hpp"

using namespace brw;

namespace {

std::vector<double> normals(std::size_t n, std::uint64_t seed, double sd = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> law(0.0, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = law(gen);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("merging accumulators equals the batch pass") {
  auto xs = normals(1000, 1, 3.0);
  for (auto& x : xs) x = std::exp(x / 3.0) + 1e3;  // skewed, offset
  MomentAccumulator batch;
  for (double x : xs) batch.add(x);
  MomentAccumulator a, b, c;
  for (std::size_t i = 0; i < xs.size(); ++i) (i < 137 ? a : i < 702 ? b : c).add(xs[i]);
  MomentAccumulator left = a;
  left.merge(b);
  left.merge(c);
  MomentAccumulator bc = b;
  bc.merge(c);
  MomentAccumulator right = a;
  right.merge(bc);
  for (const auto* m : {&left, &right}) {
    CHECK(m->count() == batch.count());
    CHECK(rel(m->mean(), batch.mean()) < 1e-9);
    CHECK(rel(m->variance(), batch.variance()) < 1e-9);
    CHECK(rel(m->central_moment(3), batch.central_moment(3)) < 1e-9);
    CHECK(rel(m->central_moment(4), batch.central_moment(4)) < 1e-9);
  }
  CHECK(batch.min() == *std::min_element(xs.begin(), xs.end()));
}

TEST_CASE("jackknife standard errors") {
  const auto xs = normals(500, 2);
  const auto s = summarize(xs);
  CHECK(rel(s.se_mean, std::sqrt(s.variance / 500.0)) < 1e-9);

  // Delete-one jackknife of the variance, done the slow way.
  std::vector<double> loo;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    MomentAccumulator m;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (j != i) m.add(xs[j]);
    loo.push_back(m.variance());
  }
  double mean = 0.0;
  for (double v : loo) mean += v / static_cast<double>(loo.size());
  double ss = 0.0;
  for (double v : loo) ss += (v - mean) * (v - mean);
  CHECK(rel(s.se_variance, std::sqrt(499.0 / 500.0 * ss)) < 1e-6);
  CHECK_THROWS_AS(summarize(std::vector<double>{1.0}), InsufficientDataError);
}

TEST_CASE("least squares") {
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
  const auto f = loglog_fit(x, y);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.residuals.size() == 5);
  y[2] = 0.0;
  CHECK_THROWS(loglog_fit(x, y));
  const std::vector<double> lin{1, 3, 5, 7, 9};
  CHECK(ols(x, std::vector<double>{2, 4, 8, 16, 32}).slope == doctest::Approx(2.0));
  CHECK(pearson(lin, lin).r == doctest::Approx(1.0));
}

TEST_CASE("KS and Anderson-Darling on exact normals") {
  const auto z = normals(100000, 3);
  CHECK(ks_distance_normal(z) < 0.006);
  CHECK(anderson_darling_normal(z) < 3.9);
  CHECK(ks_pvalue(0.0, 100) == doctest::Approx(1.0));
  CHECK(ks_pvalue(0.5, 1000) < 1e-12);
  // Tabulated asymptotic 5% point 1.358.
  CHECK(std::abs(ks_pvalue(1.358 / 1000.0, 1000000) - 0.05) < 0.002);
}

TEST_CASE("CLT battery") {
  CHECK_THROWS_AS(clt_battery(std::vector<double>(500, 2.0)), InsufficientDataError);
  CHECK_THROWS_AS(clt_battery(normals(50, 4)), InsufficientDataError);
  std::vector<double> two;
  for (int i = 0; i < 10000; ++i) two.push_back(i % 2 ? 1.0 : -1.0);
  const auto t = clt_battery(two);
  CHECK(t.excess_kurtosis == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(t.kurtosis_z < -20.0);
  CHECK_FALSE(t.gaussian_compatible);
  const auto g = clt_battery(normals(20000, 5, 7.0));
  CHECK(g.gaussian_compatible);
  CHECK(std::abs(g.skewness) < 0.15);
}

TEST_CASE("chi-square") {
  CHECK(chi_square_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_sf(0.0, 3.0) == 1.0);
  const std::vector<std::uint64_t> obs{250, 250, 250, 250};
  const std::vector<double> p(4, 0.25);
  const auto c = chi_square_gof(obs, p);
  CHECK(c.statistic == 0.0);
  CHECK(c.p_value == doctest::Approx(1.0));
  CHECK(c.dof == 3.0);
  // Geometric(1/2) truncated at 6 cells: the tail mass joins the pooled last cell.
  const std::vector<std::uint64_t> geo{500, 250, 125, 62, 31, 32};
  std::vector<double> gp;
  for (int x = 0; x < 6; ++x) gp.push_back(std::ldexp(1.0, -x - 1));
  CHECK(chi_square_gof(geo, gp).p_value > 0.5);
  const auto t = chi_square_2x2(10, 20, 30, 40);
  CHECK(t.statistic == doctest::Approx(100.0 * 200.0 * 200.0 / (30.0 * 70.0 * 40.0 * 60.0)));
  CHECK(t.dof == 1.0);
  CHECK_THROWS_AS(chi_square_2x2(1, 0, 0, 100), InsufficientDataError);
}

TEST_CASE("curve estimators on stub samples") {
  SumSamples s;
  s.grid = {1, 10, 100};
  s.by_n.assign(3, std::vector<double>(1000));
  // xi = 1 everywhere: S_n = n in every replica.
  for (std::size_t g = 0; g < 3; ++g)
    for (auto& v : s.by_n[g]) v = static_cast<double>(s.grid[g]);
  for (const auto& p : variance_curve(s)) CHECK(p.value == 0.0);

  // Gaussian stub with Var S_n = 2n: fourth central moment / n^2 close to 3 * 2^2.
  for (std::size_t g = 0; g < 3; ++g) s.by_n[g] = normals(200000, 10 + g, std::sqrt(2.0 * static_cast<double>(s.grid[g])));
  const auto var = variance_curve(s);
  for (const auto& p : var) CHECK(std::abs(p.value - 2.0) < 4.0 * p.se);
  for (const auto& p : fourth_moment_curve(s)) CHECK(std::abs(p.value - 12.0) < 4.0 * p.se);
  CHECK(plateau_ratio(var) < 1.05);

  // n = 1 with Bernoulli samples.
  SumSamples one;
  one.grid = {1};
  one.by_n = {std::vector<double>(1000)};
  for (std::size_t r = 0; r < 1000; ++r) one.by_n[0][r] = r % 3 == 0;
  CHECK(fourth_moment_curve(one)[0].value <= 1.0);

  const std::vector<CurvePoint> curve{{1, 1.0, 0.0}, {2, 1.1, 0.0}, {4, 1.0, 0.0}};
  CHECK(plateau_ratio(curve) == doctest::Approx(1.1));
  CHECK_THROWS_AS(plateau_ratio(std::span<const CurvePoint>(curve.data(), 1)), InsufficientDataError);
}

TEST_CASE("independence test") {
  std::mt19937_64 gen(9);
  std::bernoulli_distribution coin(0.3);
  std::vector<std::uint8_t> a, b;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(coin(gen));
    b.push_back(coin(gen));
  }
  CHECK(independence_test(a, a).p_value < 1e-12);
  b.pop_back();
  CHECK_THROWS_AS(independence_test(a, b), ContractError);

  // p-values of independent pairs are close to uniform.
  std::vector<double> ps;
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<std::uint8_t> x, y;
    for (int i = 0; i < 2000; ++i) {
      x.push_back(coin(gen));
      y.push_back(coin(gen));
    }
    ps.push_back(independence_test(x, y).p_value);
  }
  std::sort(ps.begin(), ps.end());
  double d = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double n = static_cast<double>(ps.size());
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - ps[i]), std::abs(ps[i] - static_cast<double>(i) / n)});
  }
  CHECK(ks_pvalue(d, ps.size()) > 1e-3);
}
