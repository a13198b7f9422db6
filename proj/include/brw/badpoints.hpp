#pragma once

// Bad points of the forward tree and the pruned snake.
//
// u_{2i-1} is bad when it is a leaf visited by an up-step followed at once
// by a down-step, and its position equals that of the vertex one step from
// u_{2i-2} toward the root side: the parent of an ordinary vertex, root_{k-1}
// for the spine vertex root_k, and the phantom for root_0.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "brw/snake.hpp"

namespace brw {

/// Position of the neighbour of vertex_of(idx) on the root side (phantom above root_0).
std::span<const std::int32_t> toward_root_position(const SnakeTrajectory& traj, Index idx);

/// Throws ContractError for even idx, RangeError unless 1 <= idx < fwd_len.
bool is_bad(const SnakeTrajectory& traj, Index idx);

struct PrunedSnake {
  std::shared_ptr<const SnakeTrajectory> base;
  std::vector<Index> kept;           ///< base index of hat-u_0, hat-u_1, ...
  std::vector<std::int64_t> gaps;    ///< X_j: bad pairs between hat-u_{2j} and hat-u_{2j+1}
  std::vector<std::int64_t> prefix;  ///< prefix[j] = X_0 + ... + X_j

  Index horizon() const noexcept { return static_cast<Index>(kept.size()) - 1; }
  /// N_n = X_0 + ... + X_{floor(n/2)}.
  std::int64_t N(Index n) const;
  /// Pruned contour values hat-C_0 .. hat-C_horizon.
  std::vector<std::int32_t> contour() const;
};

/// Deletes every bad pair up to the point where `horizon` kept forward indices
/// and the gap X_{floor(horizon/2)} are known. Throws CertificationError
/// (extra_fwd_len set) if the window ends first.
PrunedSnake prune(std::shared_ptr<const SnakeTrajectory> traj, Index horizon);

/// Forward length that makes prune(horizon) fail only rarely.
Index overgenerated_length(Index horizon, std::size_t dim);

/// #(V[1,n] \ (V[-past,0] + {phantom})).
std::size_t y_tilde(const SnakeTrajectory& traj, Index n, Index past);

/// Same count along the pruned sequence hat-u_1 .. hat-u_n.
std::size_t y_hat(const PrunedSnake& pruned, Index n, Index past);

}  // namespace brw
