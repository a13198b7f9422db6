#pragma once

// Two-sided contour process of the Kesten tree and the tree it encodes.
//
// A window covers indices [-back_len, fwd_len] and stores C_i for each index
// in one contiguous array at slot i + back_len. Graph distances between
// explored vertices come from a sparse-table range minimum:
//
//     d(u_i, u_j) = C_i + C_j - 2 * min_{i <= l <= j} C_l.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "brw/rng.hpp"

namespace brw {

using Index = std::int64_t;
using VertexId = std::int32_t;

/// Parent of the deepest spine vertex seen in a window.
inline constexpr VertexId kSpineTop = -1;

/// O(n log n) build, O(1) range-minimum over an int32 array.
class SparseTableMin {
 public:
  SparseTableMin() = default;
  explicit SparseTableMin(std::span<const std::int32_t> values);

  /// Minimum over slots [lo, hi], inclusive; requires lo <= hi < size().
  std::int32_t min(std::size_t lo, std::size_t hi) const noexcept {
    const std::size_t width = hi - lo + 1;
    const int level = std::bit_width(width) - 1;
    const std::int32_t* row = table_.data() + level_offset_[static_cast<std::size_t>(level)];
    const std::int32_t a = row[lo];
    const std::int32_t b = row[hi + 1 - (std::size_t{1} << level)];
    return a < b ? a : b;
  }

  std::size_t size() const noexcept { return size_; }

 private:
  std::size_t size_ = 0;
  std::vector<std::int32_t> table_;
  std::vector<std::size_t> level_offset_;
};

/// Window [-back_len, fwd_len] of the contour process with C_0 = 0.
///
/// When `past_height_cap() > 0` the past was generated with every backward
/// excursion above `cap` levels over the running backward minimum removed.
/// All vertices at height <= cap over their spine anchor, their order and
/// their pairwise distances are exactly those of the full process; indices
/// in the past are then positions in the compressed sequence.
class ContourPath {
 public:
  ContourPath();

  /// Values C_{-back_len..fwd_len}; C_0 must be 0 and steps must be +-1.
  static ContourPath from_values(std::vector<std::int32_t> values, Index back_len,
                                 std::int32_t past_height_cap = 0);

  /// increments[t] = C_{t-back_len+1} - C_{t-back_len}, t = 0 .. back_len+fwd_len-1.
  static ContourPath from_increments(std::span<const int> increments, Index back_len);

  Index back_len() const noexcept { return back_len_; }
  Index fwd_len() const noexcept { return fwd_len_; }
  Index first() const noexcept { return -back_len_; }
  Index last() const noexcept { return fwd_len_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool contains(Index i) const noexcept { return i >= -back_len_ && i <= fwd_len_; }
  std::int32_t past_height_cap() const noexcept { return past_height_cap_; }

  std::size_t slot(Index i) const noexcept { return static_cast<std::size_t>(i + back_len_); }

  /// C_i; throws RangeError outside the window.
  std::int32_t value(Index i) const;
  std::int32_t value_unchecked(Index i) const noexcept { return values_[slot(i)]; }

  /// Delta C(i) = C_i - C_{i-1} for i in (first, last].
  int increment(Index i) const;

  /// min_{l between i and j} C_l (either order); throws RangeError.
  std::int32_t min_value(Index i, Index j) const;
  std::int32_t min_value_unchecked(Index lo, Index hi) const noexcept {
    return rmq_.min(slot(lo), slot(hi));
  }

  std::span<const std::int32_t> values() const noexcept { return values_; }

  /// Exact equality of windows (values and compression mode).
  bool operator==(const ContourPath& other) const noexcept {
    return back_len_ == other.back_len_ && past_height_cap_ == other.past_height_cap_ &&
           values_ == other.values_;
  }

 private:
  ContourPath(std::vector<std::int32_t> values, Index back_len, std::int32_t cap);

  Index back_len_ = 0;
  Index fwd_len_ = 0;
  std::int32_t past_height_cap_ = 0;
  std::vector<std::int32_t> values_;
  SparseTableMin rmq_;
};

/// Vertices of the tree encoded by a contour window.
///
/// Ids are assigned in discovery order of a scan that walks backward from
/// index 0 to the window start and then forward to the window end; id 0 is
/// the root u_0. `parent` points toward the spine top (the contour parent);
/// the deepest spine vertex in the window has parent kSpineTop.
struct TreeIndex {
  Index back_len = 0;
  std::vector<VertexId> vertex_of;         ///< by window slot
  std::vector<Index> first_index_of;       ///< smallest window index visiting the vertex
  std::vector<VertexId> parent;            ///< contour parent, kSpineTop for the top
  std::vector<std::int32_t> depth;         ///< C at the first visit
  std::vector<std::int32_t> spine_level;   ///< k for the spine vertex u = root_k, else -1
  std::vector<VertexId> spine;             ///< spine[k] = root_k
  std::vector<std::int32_t> child_offset;  ///< CSR offsets, size vertex_count()+1
  std::vector<VertexId> child_list;        ///< children in order of first visit

  std::size_t vertex_count() const noexcept { return parent.size(); }
  VertexId vertex_at(Index i) const noexcept { return vertex_of[static_cast<std::size_t>(i + back_len)]; }
  std::span<const VertexId> children(VertexId v) const noexcept {
    const auto b = static_cast<std::size_t>(child_offset[static_cast<std::size_t>(v)]);
    const auto e = static_cast<std::size_t>(child_offset[static_cast<std::size_t>(v) + 1]);
    return {child_list.data() + b, e - b};
  }
  /// Degree in the infinite tree as far as the window shows: children seen plus the parent edge.
  std::size_t degree(VertexId v) const noexcept { return children(v).size() + 1; }
  bool is_spine(VertexId v) const noexcept { return spine_level[static_cast<std::size_t>(v)] >= 0; }

  bool operator==(const TreeIndex&) const = default;
};

/// Independent fair +-1 increments on (0, fwd_len] (from `fwd`) and on
/// (-back_len, 0] (from `back`).
ContourPath gen_contour(Index back_len, Index fwd_len, Xoshiro256& fwd, Xoshiro256& back);

/// Single-stream convenience: forward increments are drawn first.
ContourPath gen_contour(Index back_len, Index fwd_len, Xoshiro256& rng);

/// Forward walk of fwd_len steps, then a past generated step by step until
/// its minimum reaches min_{[0, fwd_len]} C - depth_below_forward_min.
/// With height_cap > 0 the past is compressed (see ContourPath).
/// Throws CertificationError if more than max_back_len past steps are needed.
ContourPath gen_contour_to_depth(Index fwd_len, std::int32_t depth_below_forward_min,
                                 std::int32_t height_cap, Xoshiro256& fwd, Xoshiro256& back,
                                 Index max_back_len);

/// Graph distance between u_i and u_j; throws RangeError.
std::int64_t tree_distance(const ContourPath& path, Index i, Index j);

inline std::int64_t tree_distance_unchecked(const ContourPath& path, Index i, Index j) noexcept {
  const Index lo = i < j ? i : j;
  const Index hi = i < j ? j : i;
  return static_cast<std::int64_t>(path.value_unchecked(i)) + path.value_unchecked(j) -
         2 * static_cast<std::int64_t>(path.min_value_unchecked(lo, hi));
}

/// C_n - 2 min_{0 <= i <= n} C_i.
std::int64_t excursion_statistic(const ContourPath& path, Index n);

/// Vertex identification in one backward-then-forward stack scan.
TreeIndex reconstruct_tree(const ContourPath& path);

}  // namespace brw
