#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "brw/analytic.hpp"
#include "brw/contour.hpp"
#include "brw/errors.hpp"
#include "brw/oracles.hpp"

using namespace brw;

namespace {

// C_{-5..0} = 1,0,-1,0,-1,0 read right to left from the origin, as in the
// two-sided picture with one forward step up.
ContourPath figure_one() { return ContourPath::from_values({-1, 0, -1, 0, 1, 0, 1}, 5); }

}  // namespace

TEST_CASE("empty walk") {
  Xoshiro256 a(1), b(2);
  const auto p = gen_contour(0, 0, a, b);
  CHECK(p.size() == 1);
  CHECK(p.value(0) == 0);
  CHECK(tree_distance(p, 0, 0) == 0);
  const auto t = reconstruct_tree(p);
  CHECK(t.vertex_count() == 1);
  CHECK(t.parent[0] == kSpineTop);
}

TEST_CASE("from_values rejects bad input") {
  CHECK_THROWS_AS(ContourPath::from_values({0, 2}, 0), ContractError);
  CHECK_THROWS_AS(ContourPath::from_values({1, 0}, 0), ContractError);
  CHECK_THROWS_AS(ContourPath::from_values({0}, 3), ContractError);
}

TEST_CASE("increments are +-1 and C_0 = 0") {
  Xoshiro256 a(11), b(12);
  const auto p = gen_contour(300, 400, a, b);
  CHECK(p.value(0) == 0);
  for (Index i = p.first() + 1; i <= p.last(); ++i) CHECK(std::abs(p.increment(i)) == 1);
}

TEST_CASE("P(C_2 = 0) = 1/2") {
  Xoshiro256 a(5), b(6);
  const int trials = 1000000;
  int hits = 0;
  for (int r = 0; r < trials; ++r) hits += gen_contour(0, 2, a, b).value(2) == 0;
  const double p = static_cast<double>(hits) / trials;
  CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("rmq equals naive minimum") {
  Xoshiro256 a(21), b(22), q(23);
  for (int w = 0; w < 5; ++w) {
    const auto p = gen_contour(static_cast<Index>(q.below(500)), static_cast<Index>(q.below(500)), a, b);
    for (int t = 0; t < 10000; ++t) {
      const Index i = p.first() + static_cast<Index>(q.below(p.size()));
      const Index j = p.first() + static_cast<Index>(q.below(p.size()));
      REQUIRE(p.min_value(i, j) == oracle::naive_min(p, i, j));
    }
  }
}

TEST_CASE("distance formula on small cases") {
  const auto f = figure_one();
  CHECK(tree_distance(f, -5, -3) == 0);
  CHECK(tree_distance(f, -2, 0) == 0);
  CHECK(tree_distance(f, 0, 0) == 0);
  CHECK_THROWS_AS(tree_distance(f, -6, 0), RangeError);
  CHECK_THROWS_AS(tree_distance(f, 0, 2), RangeError);
}

TEST_CASE("figure one identifications and spine") {
  const auto f = figure_one();
  const auto t = reconstruct_tree(f);
  CHECK(t.vertex_at(-2) == t.vertex_at(0));
  CHECK(t.vertex_at(-3) == t.vertex_at(-5));
  CHECK(t.vertex_at(-1) != t.vertex_at(0));
  REQUIRE(t.spine.size() == 2);
  CHECK(t.spine[0] == t.vertex_at(0));
  CHECK(t.spine[1] == t.vertex_at(-3));
  CHECK(t.parent[static_cast<std::size_t>(t.spine[0])] == t.spine[1]);
  CHECK(t.parent[static_cast<std::size_t>(t.spine[1])] == kSpineTop);
}

TEST_CASE("single excursion and a path") {
  const std::vector<int> up_down{1, -1};
  const auto t = reconstruct_tree(ContourPath::from_increments(up_down, 0));
  CHECK(t.vertex_count() == 2);
  CHECK(t.vertex_at(0) == t.vertex_at(2));
  CHECK(t.children(t.vertex_at(1)).empty());
  CHECK(t.parent[static_cast<std::size_t>(t.vertex_at(1))] == t.vertex_at(0));

  const std::vector<int> up_up{1, 1};
  const auto s = reconstruct_tree(ContourPath::from_increments(up_up, 0));
  CHECK(s.vertex_count() == 3);
  CHECK(s.depth == std::vector<std::int32_t>{0, 1, 2});
}

TEST_CASE("excursion statistic examples") {
  const std::vector<int> a{1, -1};
  const std::vector<int> b{-1, -1};
  CHECK(excursion_statistic(ContourPath::from_increments(a, 0), 0) == 0);
  CHECK(excursion_statistic(ContourPath::from_increments(a, 0), 2) == 0);
  CHECK(excursion_statistic(ContourPath::from_increments(b, 0), 2) == 2);
  CHECK_THROWS_AS(excursion_statistic(ContourPath::from_increments(b, 0), 3), RangeError);
}

TEST_CASE("distance formula equals BFS distance") {
  Xoshiro256 a(31), b(32), q(33);
  for (int w = 0; w < 200; ++w) {
    const Index back = static_cast<Index>(q.below(201));
    const auto p = gen_contour(back, 200 - back, a, b);
    const auto t = reconstruct_tree(p);
    const Index i = p.first() + static_cast<Index>(q.below(p.size()));
    const auto bfs = oracle::bfs_distances(t, t.vertex_at(i));
    for (Index j = p.first(); j <= p.last(); ++j)
      REQUIRE(tree_distance(p, i, j) == bfs[static_cast<std::size_t>(t.vertex_at(j))]);
  }
}

TEST_CASE("tree invariants on random windows") {
  Xoshiro256 a(41), b(42);
  for (int w = 0; w < 50; ++w) {
    const auto p = gen_contour(150, 150, a, b);
    const auto t = reconstruct_tree(p);
    // Same vertex iff zero distance.
    for (Index i = p.first(); i <= p.last(); i += 7)
      for (Index j = p.first(); j <= p.last(); ++j)
        REQUIRE((t.vertex_at(i) == t.vertex_at(j)) == (tree_distance(p, i, j) == 0));
    // Depth is C at the first visit and parents sit one level lower.
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
      REQUIRE(t.depth[v] == p.value(t.first_index_of[v]));
      if (t.parent[v] != kSpineTop) REQUIRE(t.depth[static_cast<std::size_t>(t.parent[v])] == t.depth[v] - 1);
    }
    // Spine: root_k is at the first backward time C hits -k, or the first
    // forward one when the past stays above -k.
    for (std::size_t k = 0; k < t.spine.size(); ++k) {
      const auto level = -static_cast<std::int32_t>(k);
      Index hit = 0;
      while (hit > p.first() && p.value(hit) != level) --hit;
      if (p.value(hit) != level) {
        hit = 0;
        while (p.value(hit) != level) ++hit;
      }
      REQUIRE(t.vertex_at(hit) == t.spine[k]);
    }
    // Triangle inequality.
    for (Index i = p.first(); i + 2 <= p.last(); i += 5) {
      const Index j = i + 1 + (i & 3);
      const Index k = std::min(p.last(), j + 9);
      REQUIRE(tree_distance(p, i, k) <= tree_distance(p, i, j) + tree_distance(p, j, k));
    }
  }
}

TEST_CASE("visit counts: interior vertices appear deg(v) times") {
  Xoshiro256 a(51), b(52);
  const auto p = gen_contour(400, 400, a, b);
  const auto t = reconstruct_tree(p);
  std::vector<int> visits(t.vertex_count(), 0);
  for (Index i = p.first(); i <= p.last(); ++i) ++visits[static_cast<std::size_t>(t.vertex_at(i))];
  // A vertex whose subtree closes inside the window (and is not on the spine)
  // is entered once from its parent and once back from each child.
  for (std::size_t v = 0; v < t.vertex_count(); ++v) {
    if (t.is_spine(static_cast<VertexId>(v))) continue;
    const Index f = t.first_index_of[v];
    if (f == p.first()) continue;
    Index last = f;
    for (Index i = f; i <= p.last(); ++i)
      if (t.vertex_at(i) == static_cast<VertexId>(v)) last = i;
    if (last == p.last() || p.value(last + 1) != p.value(last) - 1) continue;
    if (f < 0 && p.value(f - 1) != p.value(f) - 1) continue;
    CHECK(visits[v] == static_cast<int>(t.degree(static_cast<VertexId>(v))));
  }
}

TEST_CASE("exhaustive excursion law") {
  for (std::int64_t n = 1; n <= 14; ++n) {
    const auto via_paths = oracle::excursion_pmf_via_paths(n);
    for (std::size_t m = 0; m < via_paths.size(); ++m)
      REQUIRE(std::abs(via_paths[m] - excursion_pmf(n, static_cast<std::int64_t>(m))) <= 1e-12);
  }
}

TEST_CASE("capped past generation") {
  Xoshiro256 f(61), b(62);
  for (int r = 0; r < 100; ++r) {
    const auto p = gen_contour_to_depth(300, 9, 9, f, b, 1 << 20);
    std::int32_t fmin = 0;
    for (Index i = 0; i <= 300; ++i) fmin = std::min(fmin, p.value(i));
    CHECK(p.min_value(p.first(), 0) <= fmin - 9);
    CHECK(p.past_height_cap() == 9);
    std::int32_t run = 0;
    for (Index i = 0; i >= p.first(); --i) {
      run = std::min(run, p.value(i));
      REQUIRE(p.value(i) - run <= 9);
    }
  }
  CHECK_THROWS_AS(gen_contour_to_depth(10, 50, 0, f, b, 20), CertificationError);
}

TEST_CASE("same streams give the same window") {
  Xoshiro256 a1(7), b1(8), a2(7), b2(8);
  CHECK(gen_contour(100, 100, a1, b1) == gen_contour(100, 100, a2, b2));
}
