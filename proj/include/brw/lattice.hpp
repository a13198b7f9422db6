#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace brw {

/// A point of Z^d.
struct LatticePoint {
  std::vector<std::int32_t> coords;

  LatticePoint() = default;
  explicit LatticePoint(std::size_t dim) : coords(dim, 0) {}
  explicit LatticePoint(std::vector<std::int32_t> c) : coords(std::move(c)) {}

  static LatticePoint unit(std::size_t dim, std::size_t axis, int sign = 1) {
    LatticePoint p(dim);
    p.coords.at(axis) = sign;
    return p;
  }

  std::size_t dim() const noexcept { return coords.size(); }
  std::span<const std::int32_t> view() const noexcept { return coords; }
  bool operator==(const LatticePoint&) const = default;
  std::string to_string() const;
};

/// 128-bit packing of a lattice point: floor(128/d) bits per coordinate in
/// offset binary, valid while every |coordinate| < 2^(floor(128/d)-1).
struct PackedPoint {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  bool operator==(const PackedPoint&) const = default;
};

struct PackedPointHash {
  std::size_t operator()(const PackedPoint& p) const noexcept {
    std::uint64_t h = p.lo * 0x9e3779b97f4a7c15ULL ^ (p.hi + 0x632be59bd9b4e019ULL + (p.lo << 6) + (p.lo >> 2));
    h ^= h >> 32;
    h *= 0xd6e8feb86659fd93ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

class PointPacker {
 public:
  explicit PointPacker(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  int bits_per_coord() const noexcept { return bits_; }
  /// Largest |coordinate| that packs.
  std::int64_t max_abs() const noexcept { return max_abs_; }

  /// Packed key, or nullopt when a coordinate is out of range.
  std::optional<PackedPoint> pack(std::span<const std::int32_t> coords) const noexcept;

 private:
  std::size_t dim_;
  int bits_;
  std::int64_t max_abs_;
};

/// Hash of the raw coordinate bytes; used once packing no longer fits.
struct CoordVectorHash {
  std::size_t operator()(const std::vector<std::int32_t>& v) const noexcept;
};

/// Set of visited lattice points with a running cardinality.
class RangeLedger {
 public:
  explicit RangeLedger(std::size_t dim);

  /// Inserts p; returns true iff p was not yet present.
  bool insert(std::span<const std::int32_t> p);
  bool contains(std::span<const std::int32_t> p) const;
  std::size_t count() const noexcept { return count_; }
  std::size_t dim() const noexcept { return packer_.dim(); }
  bool packed() const noexcept { return !fallback_; }
  void reserve(std::size_t n);

 private:
  void migrate();

  PointPacker packer_;
  bool fallback_ = false;
  std::unordered_set<PackedPoint, PackedPointHash> packed_set_;
  std::unordered_set<std::vector<std::int32_t>, CoordVectorHash> wide_set_;
  std::size_t count_ = 0;
};

}  // namespace brw
