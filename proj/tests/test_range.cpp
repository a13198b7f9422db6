#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "brw/errors.hpp"
#include "brw/oracles.hpp"
#include "brw/range.hpp"

using namespace brw;

namespace {

SnakeTrajectory two_step(UnitCode draw) {
  const std::vector<int> inc{1, -1};
  const std::array<UnitCode, 1> fwd{draw};
  return snake_from_draws(ContourPath::from_increments(inc, 0), 1, fwd, {});
}

// Random certified window: alternate compressed and full pasts.
SnakeTrajectory certified_window(std::uint64_t seed, Index n, std::int32_t k, std::size_t dim) {
  const auto mode = seed % 2 ? PastMode::Compressed : PastMode::Full;
  for (std::uint64_t attempt = 0;; ++attempt) {
    try {
      return gen_certified_snake(dim, n, k, mode, seed * 1000 + attempt, 64 * (n + 64));
    } catch (const CertificationError&) {
    }
  }
}

}  // namespace

TEST_CASE("range size examples") {
  const auto s = two_step(1);
  CHECK(range_size(s, 0) == 0);
  CHECK(range_size(s, 1) == 1);
  CHECK(range_size(s, 2) == 2);
  CHECK_THROWS_AS(range_size(s, 3), RangeError);
  CHECK(y_windowed(s, 2, 0) == 1);
  CHECK_THROWS_AS(y_windowed(s, 2, 1), RangeError);
}

TEST_CASE("range grows by at most one; y_windowed decreases in M") {
  const auto s = gen_snake(2, 300, 500, 8);
  std::size_t prev = 0;
  for (Index n = 1; n <= 500; ++n) {
    const auto r = range_size(s, n);
    REQUIRE((r == prev || r == prev + 1));
    prev = r;
  }
  std::size_t last = y_windowed(s, 500, 0);
  for (Index m = 1; m <= 300; m += 13) {
    const auto y = y_windowed(s, 500, m);
    REQUIRE(y <= last);
    last = y;
  }
  CHECK(y_windowed(s, 500, 0) == oracle::y_windowed_naive(s, 500, 0));
  CHECK(y_windowed(s, 500, 300) == oracle::y_windowed_naive(s, 500, 300));
}

TEST_CASE("xi kernel, BFS reference and naive scan agree") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Index n = 20 + static_cast<Index>(seed * 37 % 481);
    const std::size_t dim = 1 + seed % 4;
    const auto s = certified_window(seed, n, 8, dim);
    for (std::int64_t k : {0, 1, 2, 4, 8}) {
      const auto fast = xi_k_all(s, k, n);
      const auto bfs = xi_k_range_bfs(s, k, 1, n);
      const auto slow = oracle::xi_naive(s, k, 1, n);
      REQUIRE(fast.values == slow);
      REQUIRE(bfs.values == slow);
      REQUIRE(fast.window_certified);
    }
  }
}

TEST_CASE("xi monotone in k and k = 0 marks first visits") {
  const auto s = certified_window(3, 800, 16, 3);
  auto prev = xi_k_all(s, 0, 800);
  for (Index i = 1; i <= 800; ++i)
    REQUIRE(prev.at(i) == (s.tree.first_index_of[static_cast<std::size_t>(s.tree.vertex_at(i))] == i));
  for (std::int64_t k = 1; k <= 16; ++k) {
    const auto cur = xi_k_all(s, k, 800);
    for (std::size_t t = 0; t < cur.values.size(); ++t) REQUIRE(cur.values[t] <= prev.values[t]);
    prev = cur;
  }
}

TEST_CASE("untruncated revisit indicator equals the windowed range") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index n = 100 + static_cast<Index>(seed * 61 % 1900);
    const auto s = gen_snake(1 + seed % 5, static_cast<Index>(seed * 17 % 300), n, seed);
    const auto d = revisit_distances(s, 1, n);
    std::size_t fresh = 0;
    for (auto v : d) fresh += v == kNoRevisit;
    REQUIRE(fresh == y_windowed(s, n, s.path.back_len()));
  }
}

TEST_CASE("certification") {
  const auto s = gen_snake(3, 0, 100, 4);
  CHECK(certified_radius(s.path, 1, 100) < 0);
  try {
    xi_k_all(s, 4, 100);
    FAIL("expected CertificationError");
  } catch (const CertificationError& e) {
    CHECK(e.extra_back_len() >= 1);
  }
  const auto c = gen_certified_snake(3, 100, 6, PastMode::Compressed, 4, 1 << 20);
  CHECK(certified_radius(c.path, 0, 100) >= 6);
  CHECK_NOTHROW(xi_k_all(c, 6, 100));
  // A compressed window cannot certify beyond its cap.
  CHECK_THROWS_AS(xi_k_all(c, 8, 100), CertificationError);
  CHECK(xi_k_all(c, 6, 0).values.empty());
}

TEST_CASE("ball counts") {
  const auto s = certified_window(5, 400, 12, 2);
  for (Index i = 1; i <= 400; i += 17) {
    // k = 0 counts earlier visits of the same vertex.
    std::size_t same = 0;
    for (Index j = s.path.first(); j < i; ++j) same += s.tree.vertex_at(j) == s.tree.vertex_at(i);
    CHECK(ball_count(s, i, 0, BallMode::AtMost) == same);
    for (std::int64_t k : {1, 3, 7, 11}) {
      std::size_t at_most = 0, exactly = 0;
      for (Index j = s.path.first(); j < i; ++j) {
        const auto d = tree_distance(s.path, i, j);
        at_most += d <= k;
        exactly += d == k;
      }
      REQUIRE(ball_count(s, i, k, BallMode::AtMost) == at_most);
      REQUIRE(ball_count(s, i, k, BallMode::Exactly) == exactly);
    }
  }
}

TEST_CASE("hitting sampler edge cases") {
  Xoshiro256 rng(1);
  CHECK(left_subtree_hits_origin(5, 0, 0, rng));
  CHECK_FALSE(left_subtree_hits_origin(5, 3, 0, rng));  // odd distance, no generations
  CHECK_THROWS_AS(left_subtree_hits_origin(0, 3, 1, rng), ContractError);
  // d = 1, j = 2: the spine walk returns w.p. 1/2, otherwise a child must step back.
  int hits = 0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) hits += left_subtree_hits_origin(1, 2, 1, rng);
  // Root at +-2 never reaches 0 in one generation; root at 0 hits at once.
  CHECK(std::abs(hits / static_cast<double>(trials) - 0.5) < 4 * std::sqrt(0.25 / trials));
}
