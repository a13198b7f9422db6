#pragma once

// Range statistics of the snake and the truncated first-visit indicators
//
//     xi_i^k = 1{ V(i) not in { V(u_j) : j < i, d(u_j, u_i) <= k } }.
//
// All truncated quantities are only trusted on a certified window: every
// index j < -back_len satisfies d(u_j, u_i) >= C_i - min_{[-back_len, i]} C,
// so the window certifies radius k at i once that gap exceeds k.

#include <cstdint>
#include <limits>
#include <vector>

#include "brw/contour.hpp"
#include "brw/snake.hpp"

namespace brw {

/// #{V(1), ..., V(n)}.
std::size_t range_size(const SnakeTrajectory& traj, Index n);

/// #(V[1, n] \ V[-past, 0]).
std::size_t y_windowed(const SnakeTrajectory& traj, Index n, Index past);

/// Largest k such that xi_i^k is determined by the window for every i in [lo, hi].
/// Bounded by the past height cap of a compressed window. May be negative.
std::int64_t certified_radius(const ContourPath& path, Index lo, Index hi);

/// Throws CertificationError unless the window certifies radius k on [lo, hi].
void certify_radius(const ContourPath& path, std::int64_t k, Index lo, Index hi);

/// No earlier visit at the same position inside the window.
inline constexpr std::int32_t kNoRevisit = std::numeric_limits<std::int32_t>::max();

/// D_i = min { d(u_j, u_i) : j < i in window, V(j) = V(i) } for i in [lo, hi],
/// kNoRevisit when no such j exists; then xi_i^k = 1{D_i > k} for every k the
/// window certifies. Uses a position hash over the window's vertices.
std::vector<std::int32_t> revisit_distances(const SnakeTrajectory& traj, Index lo, Index hi);

struct XiVector {
  std::int64_t k = 0;
  Index first = 1;                    ///< index of values[0]
  std::vector<std::uint8_t> values;   ///< xi_first^k, xi_{first+1}^k, ...
  bool window_certified = false;

  std::uint8_t at(Index i) const { return values.at(static_cast<std::size_t>(i - first)); }
  std::int64_t sum() const noexcept {
    std::int64_t s = 0;
    for (auto v : values) s += v;
    return s;
  }
};

/// xi_i^k for i in [1, n]; throws CertificationError on an insufficient window.
XiVector xi_k_all(const SnakeTrajectory& traj, std::int64_t k, Index n);
XiVector xi_k_range(const SnakeTrajectory& traj, std::int64_t k, Index lo, Index hi);

/// Reference implementation: radius-k breadth-first search on the tree around each u_i.
XiVector xi_k_range_bfs(const SnakeTrajectory& traj, std::int64_t k, Index lo, Index hi);

enum class BallMode { AtMost, Exactly };

/// #{ j < i in window : d(u_j, u_i) <= k } (or == k). Counts visits, not vertices.
std::size_t ball_count(const SnakeTrajectory& traj, Index i, std::int64_t k, BallMode mode);

enum class PastMode { Full, Compressed };

/// Trajectory with fwd_len forward steps and a past deep enough to certify
/// radius k on [0, fwd_len]. Compressed mode caps past heights at k+1, which
/// keeps every vertex within distance k+1 of the forward part.
SnakeTrajectory gen_certified_snake(std::size_t dim, Index fwd_len, std::int32_t k, PastMode mode,
                                    SnakeStreams& streams, Index max_back_len);
SnakeTrajectory gen_certified_snake(std::size_t dim, Index fwd_len, std::int32_t k, PastMode mode,
                                    std::uint64_t seed, Index max_back_len);

/// One draw of 1{0 in V(T_j^-)}: a spine walk S_j followed by a critical
/// geometric Galton-Watson tree rooted at S_j, explored up to
/// `generation_cap` generations.
bool left_subtree_hits_origin(std::size_t dim, std::int64_t j, std::int64_t generation_cap, Xoshiro256& rng);

}  // namespace brw
