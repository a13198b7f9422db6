#pragma once

// Slow, independent reference computations.

#include <cstdint>
#include <vector>

#include "brw/contour.hpp"
#include "brw/snake.hpp"

namespace brw::oracle {

/// Unweighted BFS distances on the reconstructed tree from vertex `source`.
std::vector<std::int64_t> bfs_distances(const TreeIndex& tree, VertexId source);

/// min over [lo, hi] by linear scan.
std::int32_t naive_min(const ContourPath& path, Index lo, Index hi);

/// xi_i^k for i in [lo, hi] by the O(n^2) scan over earlier window indices.
std::vector<std::uint8_t> xi_naive(const SnakeTrajectory& traj, std::int64_t k, Index lo, Index hi);

/// #(V[1, n] \ V[-past, 0]) with an ordered set of coordinate vectors.
std::size_t y_windowed_naive(const SnakeTrajectory& traj, Index n, Index past);

/// Bad-point test phrased on the tree: u_idx is a leaf at odd distance from
/// u_0 first visited at idx, and its position equals that of its grandparent
/// on the root side (the phantom stands above root_0).
bool is_bad_by_definition(const SnakeTrajectory& traj, Index idx);

/// Excursion pmf of C_n - 2 min C estimated by exhaustive enumeration through ContourPath.
std::vector<double> excursion_pmf_via_paths(std::int64_t n);

}  // namespace brw::oracle
