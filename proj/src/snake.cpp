#include "brw/snake.hpp"

#include <algorithm>
#include <string>

#include "brw/errors.hpp"

namespace brw {

LatticePoint SnakeTrajectory::point_at(Index i) const {
  if (!path.contains(i)) throw RangeError("snake index " + std::to_string(i) + " outside window");
  const auto p = position_at(i);
  return LatticePoint(std::vector<std::int32_t>(p.begin(), p.end()));
}

namespace {

template <typename DrawFwd, typename DrawBack>
SnakeTrajectory build(ContourPath path, std::size_t dim, DrawFwd&& draw_fwd, DrawBack&& draw_back) {
  if (dim == 0) throw ContractError("dimension must be at least 1");
  SnakeTrajectory s;
  s.tree = reconstruct_tree(path);
  s.path = std::move(path);
  s.dim = dim;
  s.phantom = LatticePoint::unit(dim, 0, 1);
  const std::size_t nv = s.tree.vertex_count();
  s.edge_disp.assign(nv * dim, 0);
  s.pos_vertex.assign(nv * dim, 0);

  const auto& t = s.tree;
  for (std::size_t v = 1; v < nv; ++v) {
    const UnitCode code = t.first_index_of[v] < 0 ? draw_back() : draw_fwd();
    const auto axis = static_cast<std::size_t>(std::abs(code) - 1);
    const int sign = code > 0 ? 1 : -1;
    const std::int32_t level = t.spine_level[v];
    std::int32_t* pos = s.pos_vertex.data() + v * dim;
    if (level >= 1) {
      // New spine vertex: the draw belongs to the edge below it.
      const auto child = static_cast<std::size_t>(t.spine[static_cast<std::size_t>(level - 1)]);
      s.edge_disp[child * dim + axis] = sign;
      std::copy_n(s.pos_vertex.data() + child * dim, dim, pos);
      pos[axis] -= sign;
    } else {
      const auto parent = static_cast<std::size_t>(t.parent[v]);
      s.edge_disp[v * dim + axis] = sign;
      std::copy_n(s.pos_vertex.data() + parent * dim, dim, pos);
      pos[axis] += sign;
    }
  }
  return s;
}

}  // namespace

SnakeTrajectory attach_snake(ContourPath path, std::size_t dim, Xoshiro256& disp_fwd, Xoshiro256& disp_back) {
  return build(
      std::move(path), dim, [&] { return draw_unit(disp_fwd, dim); }, [&] { return draw_unit(disp_back, dim); });
}

SnakeTrajectory snake_from_draws(ContourPath path, std::size_t dim, std::span<const UnitCode> fwd_draws,
                                 std::span<const UnitCode> back_draws) {
  std::size_t fi = 0;
  std::size_t bi = 0;
  auto take = [dim](std::span<const UnitCode> list, std::size_t& at) {
    if (at >= list.size()) throw ContractError("not enough displacement draws supplied");
    const UnitCode c = list[at++];
    if (c == 0 || static_cast<std::size_t>(std::abs(c)) > dim) throw ContractError("invalid unit vector code");
    return c;
  };
  return build(
      std::move(path), dim, [&] { return take(fwd_draws, fi); }, [&] { return take(back_draws, bi); });
}

SnakeTrajectory gen_snake(std::size_t dim, Index back_len, Index fwd_len, SnakeStreams& streams) {
  auto path = gen_contour(back_len, fwd_len, streams.contour_fwd, streams.contour_back);
  return attach_snake(std::move(path), dim, streams.disp_fwd, streams.disp_back);
}

SnakeTrajectory gen_snake(std::size_t dim, Index back_len, Index fwd_len, std::uint64_t seed) {
  SnakeStreams streams(seed);
  return gen_snake(dim, back_len, fwd_len, streams);
}

SnakeTrajectory shift_origin(const SnakeTrajectory& traj, Index i) {
  if (!traj.path.contains(i)) throw RangeError("shift_origin index outside window");
  const auto base = traj.path.values();
  const std::int32_t ci = traj.path.value_unchecked(i);
  std::vector<std::int32_t> shifted(base.begin(), base.end());
  for (auto& v : shifted) v -= ci;
  const Index new_back = traj.path.back_len() + i;

  SnakeTrajectory out;
  out.path = ContourPath::from_values(std::move(shifted), new_back, traj.path.past_height_cap());
  out.tree = reconstruct_tree(out.path);
  out.dim = traj.dim;
  const std::size_t dim = traj.dim;
  const std::size_t nv = out.tree.vertex_count();
  out.edge_disp.assign(nv * dim, 0);
  out.pos_vertex.assign(nv * dim, 0);
  const auto origin = traj.position_at(i);
  for (std::size_t v = 0; v < nv; ++v) {
    // Same window, same slots: map through the first visit.
    const Index old_index = out.tree.first_index_of[v] + i;
    const VertexId old_v = traj.tree.vertex_at(old_index);
    const auto p = traj.position(old_v);
    for (std::size_t a = 0; a < dim; ++a) out.pos_vertex[v * dim + a] = p[a] - origin[a];
    if (out.tree.parent[v] != kSpineTop) {
      const auto e = traj.displacement(old_v);
      std::copy(e.begin(), e.end(), out.edge_disp.begin() + static_cast<std::ptrdiff_t>(v * dim));
    }
  }
  // The phantom keeps its offset from the (new) root.
  out.phantom = traj.phantom;
  return out;
}

}  // namespace brw
