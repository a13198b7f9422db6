#include "brw/contour.hpp"

#include <algorithm>
#include <string>

#include "brw/errors.hpp"

namespace brw {

SparseTableMin::SparseTableMin(std::span<const std::int32_t> values) : size_(values.size()) {
  if (size_ == 0) return;
  const int levels = std::bit_width(size_);
  level_offset_.resize(static_cast<std::size_t>(levels));
  std::size_t total = 0;
  for (int k = 0; k < levels; ++k) {
    level_offset_[static_cast<std::size_t>(k)] = total;
    total += size_ - (std::size_t{1} << k) + 1;
  }
  table_.resize(total);
  std::copy(values.begin(), values.end(), table_.begin());
  for (int k = 1; k < levels; ++k) {
    const std::size_t half = std::size_t{1} << (k - 1);
    const std::int32_t* prev = table_.data() + level_offset_[static_cast<std::size_t>(k - 1)];
    std::int32_t* cur = table_.data() + level_offset_[static_cast<std::size_t>(k)];
    const std::size_t count = size_ - (std::size_t{1} << k) + 1;
    for (std::size_t i = 0; i < count; ++i) cur[i] = std::min(prev[i], prev[i + half]);
  }
}

ContourPath::ContourPath() : ContourPath(std::vector<std::int32_t>{0}, 0, 0) {}

ContourPath::ContourPath(std::vector<std::int32_t> values, Index back_len, std::int32_t cap)
    : back_len_(back_len),
      fwd_len_(static_cast<Index>(values.size()) - back_len - 1),
      past_height_cap_(cap),
      values_(std::move(values)),
      rmq_(values_) {}

ContourPath ContourPath::from_values(std::vector<std::int32_t> values, Index back_len,
                                     std::int32_t past_height_cap) {
  if (back_len < 0 || static_cast<Index>(values.size()) < back_len + 1)
    throw ContractError("contour window must contain index 0");
  if (values[static_cast<std::size_t>(back_len)] != 0) throw ContractError("contour must satisfy C_0 = 0");
  for (std::size_t s = 1; s < values.size(); ++s) {
    const auto step = values[s] - values[s - 1];
    if (step != 1 && step != -1)
      throw ContractError("contour steps must be +1 or -1 (slot " + std::to_string(s) + ")");
  }
  if (past_height_cap < 0) throw ContractError("past height cap must be nonnegative");
  return ContourPath(std::move(values), back_len, past_height_cap);
}

ContourPath ContourPath::from_increments(std::span<const int> increments, Index back_len) {
  if (back_len < 0 || static_cast<Index>(increments.size()) < back_len)
    throw ContractError("increment sequence shorter than back_len");
  std::vector<std::int32_t> values(increments.size() + 1);
  const auto origin = static_cast<std::size_t>(back_len);
  values[origin] = 0;
  for (std::size_t s = origin; s-- > 0;) values[s] = values[s + 1] - increments[s];
  for (std::size_t s = origin + 1; s < values.size(); ++s) values[s] = values[s - 1] + increments[s - 1];
  return from_values(std::move(values), back_len);
}

std::int32_t ContourPath::value(Index i) const {
  if (!contains(i)) throw RangeError("contour index " + std::to_string(i) + " outside window");
  return value_unchecked(i);
}

int ContourPath::increment(Index i) const {
  if (!contains(i) || i == first()) throw RangeError("increment index " + std::to_string(i) + " outside window");
  return value_unchecked(i) - value_unchecked(i - 1);
}

std::int32_t ContourPath::min_value(Index i, Index j) const {
  if (!contains(i) || !contains(j)) throw RangeError("range-minimum query outside window");
  return min_value_unchecked(std::min(i, j), std::max(i, j));
}

namespace {

std::vector<std::int32_t> forward_values(Index fwd_len, Xoshiro256& fwd) {
  std::vector<std::int32_t> out(static_cast<std::size_t>(fwd_len));
  BitSource bits(fwd);
  std::int32_t c = 0;
  for (auto& v : out) {
    c += bits.next() ? 1 : -1;
    v = c;
  }
  return out;
}

ContourPath assemble(const std::vector<std::int32_t>& past_rev, const std::vector<std::int32_t>& fwd_vals,
                     std::int32_t cap) {
  // past_rev[t] = C_{-(t+1)}
  std::vector<std::int32_t> values;
  values.reserve(past_rev.size() + fwd_vals.size() + 1);
  values.insert(values.end(), past_rev.rbegin(), past_rev.rend());
  values.push_back(0);
  values.insert(values.end(), fwd_vals.begin(), fwd_vals.end());
  const auto back_len = static_cast<Index>(past_rev.size());
  return ContourPath::from_values(std::move(values), back_len, cap);
}

}  // namespace

ContourPath gen_contour(Index back_len, Index fwd_len, Xoshiro256& fwd, Xoshiro256& back) {
  if (back_len < 0 || fwd_len < 0) throw ContractError("window lengths must be nonnegative");
  const auto fwd_vals = forward_values(fwd_len, fwd);
  std::vector<std::int32_t> past(static_cast<std::size_t>(back_len));
  BitSource bits(back);
  std::int32_t c = 0;
  for (auto& v : past) {
    c += bits.next() ? 1 : -1;
    v = c;
  }
  return assemble(past, fwd_vals, 0);
}

ContourPath gen_contour(Index back_len, Index fwd_len, Xoshiro256& rng) {
  return gen_contour(back_len, fwd_len, rng, rng);
}

ContourPath gen_contour_to_depth(Index fwd_len, std::int32_t depth_below_forward_min, std::int32_t height_cap,
                                 Xoshiro256& fwd, Xoshiro256& back, Index max_back_len) {
  if (fwd_len < 0 || depth_below_forward_min < 0 || height_cap < 0)
    throw ContractError("invalid window request");
  const auto fwd_vals = forward_values(fwd_len, fwd);
  std::int32_t fmin = 0;
  for (auto v : fwd_vals) fmin = std::min(fmin, v);
  const std::int32_t target = fmin - depth_below_forward_min;

  std::vector<std::int32_t> past;
  BitSource bits(back);
  std::int32_t c = 0;
  std::int32_t running_min = 0;
  while (running_min > target) {
    if (static_cast<Index>(past.size()) >= max_back_len)
      throw CertificationError("past window cap reached before the required depth", running_min - target);
    int step = bits.next() ? 1 : -1;
    if (height_cap > 0 && c - running_min >= height_cap) step = -1;
    c += step;
    running_min = std::min(running_min, c);
    past.push_back(c);
  }
  return assemble(past, fwd_vals, height_cap);
}

std::int64_t tree_distance(const ContourPath& path, Index i, Index j) {
  if (!path.contains(i) || !path.contains(j))
    throw RangeError("tree_distance index outside window");
  return tree_distance_unchecked(path, i, j);
}

std::int64_t excursion_statistic(const ContourPath& path, Index n) {
  if (n < 0 || !path.contains(n)) throw RangeError("excursion_statistic index outside window");
  return static_cast<std::int64_t>(path.value_unchecked(n)) - 2 * static_cast<std::int64_t>(path.min_value_unchecked(0, n));
}

TreeIndex reconstruct_tree(const ContourPath& path) {
  TreeIndex t;
  t.back_len = path.back_len();
  const std::size_t slots = path.size();
  t.vertex_of.assign(slots, 0);
  const std::size_t reserve = slots / 2 + 2;
  t.first_index_of.reserve(reserve);
  t.parent.reserve(reserve);

  auto make_vertex = [&](VertexId parent, Index first) {
    const auto id = static_cast<VertexId>(t.parent.size());
    t.parent.push_back(parent);
    t.first_index_of.push_back(first);
    return id;
  };

  const VertexId root = make_vertex(kSpineTop, 0);
  t.spine.push_back(root);
  t.vertex_of[path.slot(0)] = root;

  // Backward scan. stack.front() is the deepest spine vertex discovered.
  std::vector<VertexId> stack{root};
  for (Index i = 0; i > path.first(); --i) {
    const int delta = path.value_unchecked(i - 1) - path.value_unchecked(i);
    if (delta == 1) {
      stack.push_back(make_vertex(stack.back(), i - 1));
    } else if (stack.size() > 1) {
      stack.pop_back();
    } else {
      const VertexId s = make_vertex(kSpineTop, i - 1);
      t.parent[static_cast<std::size_t>(stack.back())] = s;
      t.spine.push_back(s);
      stack.back() = s;
    }
    const VertexId v = stack.back();
    t.first_index_of[static_cast<std::size_t>(v)] = i - 1;
    t.vertex_of[path.slot(i - 1)] = v;
  }

  // Forward scan starts from the known ancestry of the root.
  stack.assign(t.spine.rbegin(), t.spine.rend());
  for (Index i = 0; i < path.last(); ++i) {
    const int delta = path.value_unchecked(i + 1) - path.value_unchecked(i);
    if (delta == 1) {
      stack.push_back(make_vertex(stack.back(), i + 1));
    } else if (stack.size() > 1) {
      stack.pop_back();
    } else {
      const VertexId s = make_vertex(kSpineTop, i + 1);
      t.parent[static_cast<std::size_t>(stack.back())] = s;
      t.spine.push_back(s);
      stack.back() = s;
    }
    t.vertex_of[path.slot(i + 1)] = stack.back();
  }

  const std::size_t nv = t.parent.size();
  t.depth.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) t.depth[v] = path.value_unchecked(t.first_index_of[v]);
  t.spine_level.assign(nv, -1);
  for (std::size_t k = 0; k < t.spine.size(); ++k)
    t.spine_level[static_cast<std::size_t>(t.spine[k])] = static_cast<std::int32_t>(k);

  // Children in order of first visit: walk slots left to right, emit first visits.
  t.child_offset.assign(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) {
    const VertexId p = t.parent[v];
    if (p != kSpineTop) ++t.child_offset[static_cast<std::size_t>(p) + 1];
  }
  for (std::size_t v = 0; v < nv; ++v) t.child_offset[v + 1] += t.child_offset[v];
  t.child_list.resize(static_cast<std::size_t>(t.child_offset[nv]));
  std::vector<std::int32_t> fill(t.child_offset.begin(), t.child_offset.end() - 1);
  for (std::size_t s = 0; s < slots; ++s) {
    const VertexId v = t.vertex_of[s];
    const Index idx = static_cast<Index>(s) - t.back_len;
    if (t.first_index_of[static_cast<std::size_t>(v)] != idx) continue;
    const VertexId p = t.parent[static_cast<std::size_t>(v)];
    if (p == kSpineTop) continue;
    t.child_list[static_cast<std::size_t>(fill[static_cast<std::size_t>(p)]++)] = v;
  }
  return t;
}

}  // namespace brw
