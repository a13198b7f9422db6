#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "brw/badpoints.hpp"
#include "brw/errors.hpp"
#include "brw/oracles.hpp"
#include "brw/snake.hpp"
#include "brw/stats.hpp"

using namespace brw;

namespace {

std::int64_t l1_step(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  std::int64_t s = 0;
  for (std::size_t t = 0; t < a.size(); ++t) s += std::abs(a[t] - b[t]);
  return s;
}

}  // namespace

TEST_CASE("single position at the origin") {
  const auto s = gen_snake(3, 0, 0, 99);
  CHECK(s.point_at(0) == LatticePoint(3));
  CHECK_THROWS_AS(s.point_at(1), RangeError);
  CHECK_THROWS_AS(gen_snake(0, 1, 1, 1), ContractError);
}

TEST_CASE("snake invariants on random windows") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t dim = 1 + seed % 5;
    const auto s = gen_snake(dim, 250, 250, seed);
    const auto& p = s.path;
    const auto& t = s.tree;
    CHECK(s.point_at(0) == LatticePoint(dim));
    for (Index i = p.first() + 1; i <= p.last(); ++i) {
      REQUIRE(l1_step(s.position_at(i - 1), s.position_at(i)) == 1);
      // A down-step returns to the parent's position.
      if (p.increment(i) == -1 && t.parent[static_cast<std::size_t>(t.vertex_at(i - 1))] != kSpineTop &&
          !t.is_spine(t.vertex_at(i - 1)))
        REQUIRE(t.vertex_at(i) == t.parent[static_cast<std::size_t>(t.vertex_at(i - 1))]);
    }
    // Positions are sums of edge displacements along the path to the root.
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
      std::vector<std::int64_t> acc(dim, 0);
      VertexId w = static_cast<VertexId>(v);
      // Walk to the root: up through parents until the spine, then down the spine.
      while (!t.is_spine(w)) {
        const auto d = s.displacement(w);
        for (std::size_t a = 0; a < dim; ++a) acc[a] += d[a];
        w = t.parent[static_cast<std::size_t>(w)];
      }
      for (auto level = t.spine_level[static_cast<std::size_t>(w)]; level > 0; --level) {
        const auto d = s.displacement(t.spine[static_cast<std::size_t>(level - 1)]);
        for (std::size_t a = 0; a < dim; ++a) acc[a] -= d[a];
      }
      const auto pos = s.position(static_cast<VertexId>(v));
      for (std::size_t a = 0; a < dim; ++a) REQUIRE(acc[a] == pos[a]);
    }
  }
}

TEST_CASE("every edge carries a unit vector") {
  const auto s = gen_snake(4, 100, 100, 5);
  for (std::size_t v = 0; v < s.tree.vertex_count(); ++v) {
    if (s.tree.parent[v] == kSpineTop) continue;
    std::int64_t l1 = 0;
    for (auto c : s.displacement(static_cast<VertexId>(v))) l1 += std::abs(c);
    CHECK(l1 == 1);
  }
}

TEST_CASE("up-step displacement law in d = 1") {
  // Given any past, the first forward up-step moves +-1 with probability 1/2.
  const int trials = 1000000;
  std::uint64_t plus = 0, total = 0;
  for (std::uint64_t seed = 0; total < static_cast<std::uint64_t>(trials); ++seed) {
    const auto s = gen_snake(1, 8, 64, seed);
    for (Index i = 1; i <= 64 && total < static_cast<std::uint64_t>(trials); ++i) {
      if (s.path.increment(i) != 1) continue;
      ++total;
      plus += s.position_at(i)[0] - s.position_at(i - 1)[0] == 1;
    }
  }
  const double p = static_cast<double>(plus) / static_cast<double>(total);
  CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("determinism and explicit draws") {
  CHECK(gen_snake(5, 300, 300, 1234) == gen_snake(5, 300, 300, 1234));
  CHECK_FALSE(gen_snake(5, 300, 300, 1234) == gen_snake(5, 300, 300, 1235));

  const std::vector<int> inc{1, -1};
  const auto path = ContourPath::from_increments(inc, 0);
  const std::array<UnitCode, 1> fwd{-1};
  const auto s = snake_from_draws(path, 1, fwd, {});
  CHECK(s.point_at(1).coords == std::vector<std::int32_t>{-1});
  CHECK(s.point_at(2).coords == std::vector<std::int32_t>{0});
  const std::array<UnitCode, 1> bad{2};
  CHECK_THROWS_AS(snake_from_draws(path, 1, bad, {}), ContractError);
  CHECK_THROWS_AS(snake_from_draws(path, 1, {}, {}), ContractError);
}

TEST_CASE("shift_origin") {
  const auto s = gen_snake(3, 200, 200, 77);
  CHECK(shift_origin(s, 0) == s);
  for (Index i : {-150, -1, 1, 37, 200}) {
    const auto t = shift_origin(s, i);
    CHECK(t.point_at(0) == LatticePoint(3));
    for (Index j = s.path.first(); j <= s.path.last(); ++j) {
      const auto a = s.point_at(j);
      const auto b = t.point_at(j - i);
      const auto o = s.point_at(i);
      for (std::size_t c = 0; c < 3; ++c) REQUIRE(b.coords[c] == a.coords[c] - o.coords[c]);
    }
    CHECK(shift_origin(t, -i) == s);
  }
  CHECK_THROWS_AS(shift_origin(s, 201), RangeError);
}

TEST_CASE("first step law is shift invariant") {
  // Chi-square of V(1) - V(0) over the 2d unit vectors, original vs shifted by a random j.
  const std::size_t dim = 3;
  std::vector<std::uint64_t> orig(2 * dim, 0), shifted(2 * dim, 0);
  Xoshiro256 pick(3);
  auto cell = [&](const SnakeTrajectory& s) {
    const auto a = s.position_at(0);
    const auto b = s.position_at(1);
    for (std::size_t c = 0; c < dim; ++c)
      if (b[c] != a[c]) return 2 * c + (b[c] > a[c] ? 0 : 1);
    return std::size_t{0};
  };
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    const auto s = gen_snake(dim, 40, 40, seed);
    ++orig[cell(s)];
    ++shifted[cell(shift_origin(s, -static_cast<Index>(pick.below(40))))];
  }
  std::vector<double> uniform(2 * dim, 1.0 / (2.0 * dim));
  CHECK(chi_square_gof(orig, uniform).p_value > 1e-3);
  CHECK(chi_square_gof(shifted, uniform).p_value > 1e-3);
}

TEST_CASE("bad-point characterizations agree") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t dim = 1 + seed % 3;
    const auto s = gen_snake(dim, 50, 400, seed);
    for (Index i = 1; i + 1 <= 400; i += 2) REQUIRE(is_bad(s, i) == oracle::is_bad_by_definition(s, i));
  }
}
