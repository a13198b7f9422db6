#include "brw/oracles.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <set>

#include "brw/errors.hpp"

namespace brw::oracle {

std::vector<std::int64_t> bfs_distances(const TreeIndex& tree, VertexId source) {
  std::vector<std::int64_t> dist(tree.vertex_count(), -1);
  std::deque<VertexId> queue{source};
  dist[static_cast<std::size_t>(source)] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    auto relax = [&](VertexId w) {
      if (dist[static_cast<std::size_t>(w)] >= 0) return;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
      queue.push_back(w);
    };
    const VertexId p = tree.parent[static_cast<std::size_t>(u)];
    if (p != kSpineTop) relax(p);
    for (VertexId c : tree.children(u)) relax(c);
  }
  return dist;
}

std::int32_t naive_min(const ContourPath& path, Index lo, Index hi) {
  if (lo > hi) std::swap(lo, hi);
  std::int32_t m = path.value(lo);
  for (Index l = lo; l <= hi; ++l) m = std::min(m, path.value(l));
  return m;
}

std::vector<std::uint8_t> xi_naive(const SnakeTrajectory& traj, std::int64_t k, Index lo, Index hi) {
  std::vector<std::uint8_t> out;
  for (Index i = lo; i <= hi; ++i) {
    const auto vi = traj.point_at(i);
    std::uint8_t fresh = 1;
    for (Index j = traj.path.first(); j < i && fresh; ++j) {
      if (tree_distance(traj.path, i, j) <= k && traj.point_at(j) == vi) fresh = 0;
    }
    out.push_back(fresh);
  }
  return out;
}

std::size_t y_windowed_naive(const SnakeTrajectory& traj, Index n, Index past) {
  std::set<std::vector<std::int32_t>> before, after;
  for (Index i = -past; i <= 0; ++i) before.insert(traj.point_at(i).coords);
  for (Index i = 1; i <= n; ++i) {
    auto p = traj.point_at(i).coords;
    if (!before.count(p)) after.insert(std::move(p));
  }
  return after.size();
}

bool is_bad_by_definition(const SnakeTrajectory& traj, Index idx) {
  const auto& t = traj.tree;
  if (idx < 1 || idx >= traj.path.fwd_len()) throw RangeError("index outside forward window");
  const VertexId v = t.vertex_at(idx);
  const auto vs = static_cast<std::size_t>(v);
  if (t.first_index_of[vs] != idx || t.is_spine(v)) return false;
  if (tree_distance(traj.path, 0, idx) % 2 == 0) return false;
  if (!t.children(v).empty()) return false;
  // A leaf is left right after its only visit; anything else means the window cut it.
  if (t.vertex_at(idx + 1) == v) return false;

  auto up = [&](VertexId w) -> std::optional<VertexId> {
    const std::int32_t level = t.spine_level[static_cast<std::size_t>(w)];
    if (level == 0) return std::nullopt;
    if (level > 0) return t.spine[static_cast<std::size_t>(level - 1)];
    return t.parent[static_cast<std::size_t>(w)];
  };
  const auto parent = up(v);
  const auto grand = parent ? up(*parent) : std::nullopt;
  const auto here = traj.position(v);
  const auto there = grand ? traj.position(*grand) : traj.phantom.view();
  return std::equal(here.begin(), here.end(), there.begin());
}

std::vector<double> excursion_pmf_via_paths(std::int64_t n) {
  if (n < 0 || n > 16) throw ResourceError("path enumeration is limited to n <= 16");
  std::vector<double> pmf(static_cast<std::size_t>(2 * n + 1), 0.0);
  const std::uint64_t paths = std::uint64_t{1} << n;
  std::vector<int> inc(static_cast<std::size_t>(n));
  for (std::uint64_t bits = 0; bits < paths; ++bits) {
    for (std::int64_t t = 0; t < n; ++t) inc[static_cast<std::size_t>(t)] = ((bits >> t) & 1U) ? 1 : -1;
    const auto path = ContourPath::from_increments(inc, 0);
    pmf[static_cast<std::size_t>(excursion_statistic(path, n))] += 1.0 / static_cast<double>(paths);
  }
  return pmf;
}

}  // namespace brw::oracle
