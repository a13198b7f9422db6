#pragma once

// Branching random walk indexed by the tree of a contour window.
//
// Every tree edge carries an independent uniform unit vector of Z^d. The
// draws are consumed in vertex-id order: vertices discovered by the backward
// scan draw from the backward displacement stream, the rest from the forward
// one. Along the forward exploration this is the increment description:
// an up-step draws a fresh unit vector, a down-step returns to the parent.

#include <cstdint>
#include <span>
#include <vector>

#include "brw/contour.hpp"
#include "brw/lattice.hpp"
#include "brw/rng.hpp"

namespace brw {

/// Unit vector code: +(a+1) for +e_a, -(a+1) for -e_a.
using UnitCode = std::int32_t;

inline UnitCode draw_unit(Xoshiro256& rng, std::size_t dim) noexcept {
  const auto r = rng.below(2 * dim);
  const auto axis = static_cast<UnitCode>(r >> 1);
  return (r & 1U) ? -(axis + 1) : (axis + 1);
}

struct SnakeTrajectory {
  ContourPath path;
  TreeIndex tree;
  std::size_t dim = 1;
  std::vector<std::int32_t> edge_disp;   ///< vertex-major, displacement from the parent
  std::vector<std::int32_t> pos_vertex;  ///< vertex-major positions
  LatticePoint phantom;                  ///< artificial neighbour of the root

  std::span<const std::int32_t> position(VertexId v) const noexcept {
    return {pos_vertex.data() + static_cast<std::size_t>(v) * dim, dim};
  }
  std::span<const std::int32_t> displacement(VertexId v) const noexcept {
    return {edge_disp.data() + static_cast<std::size_t>(v) * dim, dim};
  }
  /// V(i) without bounds checks.
  std::span<const std::int32_t> position_at(Index i) const noexcept { return position(tree.vertex_at(i)); }
  /// V(i) as a value; throws RangeError outside the window.
  LatticePoint point_at(Index i) const;

  bool operator==(const SnakeTrajectory&) const = default;
};

/// Attaches displacements to `path`; draws come from the two displacement streams.
SnakeTrajectory attach_snake(ContourPath path, std::size_t dim, Xoshiro256& disp_fwd, Xoshiro256& disp_back);

/// Attaches displacements given explicitly in consumption order.
/// Throws ContractError if either list is too short or holds an invalid code.
SnakeTrajectory snake_from_draws(ContourPath path, std::size_t dim, std::span<const UnitCode> fwd_draws,
                                 std::span<const UnitCode> back_draws);

/// Contour from the two contour streams, displacements from the two displacement streams.
SnakeTrajectory gen_snake(std::size_t dim, Index back_len, Index fwd_len, SnakeStreams& streams);
SnakeTrajectory gen_snake(std::size_t dim, Index back_len, Index fwd_len, std::uint64_t seed);

/// Re-indexes so that index i becomes 0 and translates positions by -V(i).
/// The tree shape and edge displacements are unchanged; spine marks follow the new root.
SnakeTrajectory shift_origin(const SnakeTrajectory& traj, Index i);

}  // namespace brw
