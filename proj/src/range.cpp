#include "brw/range.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <string>

#include "brw/errors.hpp"
#include "brw/lattice.hpp"

namespace brw {

namespace {

void require_forward(const SnakeTrajectory& traj, Index n, const char* what) {
  if (n < 0 || n > traj.path.fwd_len()) throw RangeError(std::string(what) + ": n outside forward window");
}

void require_range(const ContourPath& path, Index lo, Index hi) {
  if (lo > hi) throw ContractError("empty index range");
  if (!path.contains(lo) || !path.contains(hi)) throw RangeError("index range outside window");
}

// Per-coordinate multipliers for the linear position hash.
std::uint64_t axis_multiplier(std::size_t a) noexcept { return mix64(0x5851f42d4c957f2dULL + a) | 1U; }

}  // namespace

std::size_t range_size(const SnakeTrajectory& traj, Index n) {
  require_forward(traj, n, "range_size");
  RangeLedger ledger(traj.dim);
  ledger.reserve(static_cast<std::size_t>(n));
  for (Index i = 1; i <= n; ++i) ledger.insert(traj.position_at(i));
  return ledger.count();
}

std::size_t y_windowed(const SnakeTrajectory& traj, Index n, Index past) {
  require_forward(traj, n, "y_windowed");
  if (past < 0 || past > traj.path.back_len()) throw RangeError("y_windowed: past outside backward window");
  RangeLedger ledger(traj.dim);
  ledger.reserve(static_cast<std::size_t>(n + past + 1));
  for (Index i = -past; i <= 0; ++i) ledger.insert(traj.position_at(i));
  std::size_t fresh = 0;
  for (Index i = 1; i <= n; ++i) fresh += ledger.insert(traj.position_at(i)) ? 1 : 0;
  return fresh;
}

std::int64_t certified_radius(const ContourPath& path, Index lo, Index hi) {
  require_range(path, lo, hi);
  if (path.past_height_cap() > 0 && lo < 0)
    throw ContractError("compressed windows certify forward indices only");
  std::int64_t gap = std::numeric_limits<std::int64_t>::max();
  std::int32_t running = path.min_value_unchecked(path.first(), lo);
  for (Index i = lo; i <= hi; ++i) {
    const std::int32_t c = path.value_unchecked(i);
    running = std::min(running, c);
    gap = std::min<std::int64_t>(gap, c - running);
  }
  std::int64_t k = gap - 1;
  if (path.past_height_cap() > 0) k = std::min<std::int64_t>(k, path.past_height_cap());
  return k;
}

void certify_radius(const ContourPath& path, std::int64_t k, Index lo, Index hi) {
  if (k < 0) throw ContractError("radius must be nonnegative");
  const std::int64_t have = certified_radius(path, lo, hi);
  if (have >= k) return;
  if (path.past_height_cap() > 0 && k > path.past_height_cap())
    throw CertificationError("radius exceeds the past height cap of a compressed window", 0);
  // Every missing level of depth costs at least one more backward step.
  throw CertificationError("window too short to certify radius " + std::to_string(k), k - have);
}

std::vector<std::int32_t> revisit_distances(const SnakeTrajectory& traj, Index lo, Index hi) {
  const auto& path = traj.path;
  const auto& tree = traj.tree;
  require_range(path, lo, hi);
  const std::size_t nv = tree.vertex_count();
  const std::size_t dim = traj.dim;

  std::vector<std::uint64_t> mult(dim);
  for (std::size_t a = 0; a < dim; ++a) mult[a] = axis_multiplier(a);
  std::vector<std::uint64_t> hash(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const auto p = traj.position(static_cast<VertexId>(v));
    std::uint64_t h = 0;
    for (std::size_t a = 0; a < dim; ++a) h += static_cast<std::uint64_t>(static_cast<std::int64_t>(p[a])) * mult[a];
    hash[v] = mix64(h);
  }

  // Chains of vertices sharing a position, ordered by first visit.
  // Open addressing: slot -> chain head, tail kept alongside.
  const std::size_t cap = std::bit_ceil(2 * nv + 2);
  const std::size_t mask = cap - 1;
  std::vector<VertexId> head(cap, -1);
  std::vector<VertexId> tail(cap, -1);
  std::vector<VertexId> next(nv, -1);
  auto same_pos = [&](VertexId a, VertexId b) {
    const auto pa = traj.position(a);
    const auto pb = traj.position(b);
    return std::equal(pa.begin(), pa.end(), pb.begin());
  };
  const std::size_t slots = path.size();
  for (std::size_t s = 0; s < slots; ++s) {
    const VertexId v = tree.vertex_of[s];
    const Index i = static_cast<Index>(s) - path.back_len();
    if (tree.first_index_of[static_cast<std::size_t>(v)] != i) continue;
    std::size_t h = hash[static_cast<std::size_t>(v)] & mask;
    for (;;) {
      const VertexId first = head[h];
      if (first < 0) {
        head[h] = tail[h] = v;
        break;
      }
      if (hash[static_cast<std::size_t>(first)] == hash[static_cast<std::size_t>(v)] && same_pos(first, v)) {
        next[static_cast<std::size_t>(tail[h])] = v;
        tail[h] = v;
        break;
      }
      h = (h + 1) & mask;
    }
  }

  std::vector<std::int32_t> out(static_cast<std::size_t>(hi - lo + 1), kNoRevisit);
  for (Index i = lo; i <= hi; ++i) {
    const VertexId v = tree.vertex_at(i);
    auto& d = out[static_cast<std::size_t>(i - lo)];
    if (tree.first_index_of[static_cast<std::size_t>(v)] < i) {
      d = 0;
      continue;
    }
    std::size_t h = hash[static_cast<std::size_t>(v)] & mask;
    while (!(hash[static_cast<std::size_t>(head[h])] == hash[static_cast<std::size_t>(v)] && same_pos(head[h], v)))
      h = (h + 1) & mask;
    for (VertexId w = head[h]; w >= 0 && w != v; w = next[static_cast<std::size_t>(w)]) {
      const Index j = tree.first_index_of[static_cast<std::size_t>(w)];
      const auto dist = tree_distance_unchecked(path, j, i);
      if (dist < d) d = static_cast<std::int32_t>(dist);
    }
  }
  return out;
}

XiVector xi_k_range(const SnakeTrajectory& traj, std::int64_t k, Index lo, Index hi) {
  certify_radius(traj.path, k, lo, hi);
  const auto dist = revisit_distances(traj, lo, hi);
  XiVector xi;
  xi.k = k;
  xi.first = lo;
  xi.window_certified = true;
  xi.values.resize(dist.size());
  for (std::size_t t = 0; t < dist.size(); ++t) xi.values[t] = dist[t] > k ? 1 : 0;
  return xi;
}

XiVector xi_k_all(const SnakeTrajectory& traj, std::int64_t k, Index n) {
  require_forward(traj, n, "xi_k_all");
  if (n == 0) {
    XiVector xi;
    xi.k = k;
    xi.window_certified = true;
    return xi;
  }
  return xi_k_range(traj, k, 1, n);
}

XiVector xi_k_range_bfs(const SnakeTrajectory& traj, std::int64_t k, Index lo, Index hi) {
  certify_radius(traj.path, k, lo, hi);
  const auto& tree = traj.tree;
  const std::size_t nv = tree.vertex_count();
  std::vector<std::int32_t> seen(nv, -1);
  std::vector<std::pair<VertexId, std::int64_t>> queue;

  XiVector xi;
  xi.k = k;
  xi.first = lo;
  xi.window_certified = true;
  xi.values.assign(static_cast<std::size_t>(hi - lo + 1), 1);
  for (Index i = lo; i <= hi; ++i) {
    const VertexId v = tree.vertex_at(i);
    const auto stamp = static_cast<std::int32_t>(i - lo);
    const auto target = traj.position(v);
    bool hit = false;
    queue.clear();
    queue.emplace_back(v, 0);
    seen[static_cast<std::size_t>(v)] = stamp;
    for (std::size_t q = 0; q < queue.size() && !hit; ++q) {
      const auto [u, du] = queue[q];
      if (tree.first_index_of[static_cast<std::size_t>(u)] < i) {
        const auto p = traj.position(u);
        if (std::equal(p.begin(), p.end(), target.begin())) hit = true;
      }
      if (du == k) continue;
      auto visit = [&](VertexId w) {
        if (seen[static_cast<std::size_t>(w)] == stamp) return;
        seen[static_cast<std::size_t>(w)] = stamp;
        queue.emplace_back(w, du + 1);
      };
      const VertexId p = tree.parent[static_cast<std::size_t>(u)];
      if (p != kSpineTop) visit(p);
      for (VertexId c : tree.children(u)) {
        // Subtrees entered away from u_i start at their first visit.
        if (tree.first_index_of[static_cast<std::size_t>(c)] > i) break;
        visit(c);
      }
    }
    if (hit) xi.values[static_cast<std::size_t>(i - lo)] = 0;
  }
  return xi;
}

std::size_t ball_count(const SnakeTrajectory& traj, Index i, std::int64_t k, BallMode mode) {
  const auto& path = traj.path;
  if (!path.contains(i)) throw RangeError("ball_count index outside window");
  if (k < 0) throw ContractError("radius must be nonnegative");
  if (path.past_height_cap() > 0 && k >= path.past_height_cap())
    throw CertificationError("visit counts need radius below the past height cap", 0);
  certify_radius(path, k, i, i);
  const std::int32_t ci = path.value_unchecked(i);
  std::int32_t m = ci;
  std::size_t count = 0;
  for (Index j = i - 1; j >= path.first(); --j) {
    const std::int32_t cj = path.value_unchecked(j);
    m = std::min(m, cj);
    if (ci - m > k) break;
    const std::int64_t d = static_cast<std::int64_t>(ci) + cj - 2 * static_cast<std::int64_t>(m);
    if (mode == BallMode::AtMost ? d <= k : d == k) ++count;
  }
  return count;
}

SnakeTrajectory gen_certified_snake(std::size_t dim, Index fwd_len, std::int32_t k, PastMode mode,
                                    SnakeStreams& streams, Index max_back_len) {
  if (k < 0) throw ContractError("radius must be nonnegative");
  const std::int32_t cap = mode == PastMode::Compressed ? k + 1 : 0;
  auto path = gen_contour_to_depth(fwd_len, k + 1, cap, streams.contour_fwd, streams.contour_back, max_back_len);
  return attach_snake(std::move(path), dim, streams.disp_fwd, streams.disp_back);
}

SnakeTrajectory gen_certified_snake(std::size_t dim, Index fwd_len, std::int32_t k, PastMode mode,
                                    std::uint64_t seed, Index max_back_len) {
  SnakeStreams streams(seed);
  return gen_certified_snake(dim, fwd_len, k, mode, streams, max_back_len);
}

bool left_subtree_hits_origin(std::size_t dim, std::int64_t j, std::int64_t generation_cap, Xoshiro256& rng) {
  if (dim == 0) throw ContractError("dimension must be at least 1");
  if (j < 0 || generation_cap < 0) throw ContractError("negative spine level or generation cap");
  std::vector<std::int32_t> cur(dim, 0);
  for (std::int64_t s = 0; s < j; ++s) {
    const UnitCode c = draw_unit(rng, dim);
    cur[static_cast<std::size_t>(std::abs(c) - 1)] += c > 0 ? 1 : -1;
  }
  auto l1 = [dim](const std::int32_t* p) {
    std::int64_t s = 0;
    for (std::size_t a = 0; a < dim; ++a) s += std::abs(p[a]);
    return s;
  };
  if (l1(cur.data()) == 0) return true;
  if (l1(cur.data()) > generation_cap) return false;

  std::vector<std::int32_t> next;
  for (std::int64_t gen = 0; gen < generation_cap && !cur.empty(); ++gen) {
    next.clear();
    const std::int64_t left = generation_cap - gen - 1;  // generations still available to the children
    for (std::size_t off = 0; off < cur.size(); off += dim) {
      const std::uint32_t kids = geometric_half(rng);
      for (std::uint32_t c = 0; c < kids; ++c) {
        const UnitCode u = draw_unit(rng, dim);
        const std::size_t base = next.size();
        next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(off),
                    cur.begin() + static_cast<std::ptrdiff_t>(off + dim));
        next[base + static_cast<std::size_t>(std::abs(u) - 1)] += u > 0 ? 1 : -1;
        const std::int64_t dist = l1(next.data() + base);
        if (dist == 0) return true;
        // Out of reach before the cap: drop the subtree.
        if (dist > left) next.resize(base);
      }
    }
    cur.swap(next);
  }
  return false;
}

}  // namespace brw
