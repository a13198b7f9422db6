#include "brw/lattice.hpp"

#include <algorithm>
#include <cstring>

#include "brw/errors.hpp"

namespace brw {

std::string LatticePoint::to_string() const {
  std::string out = "(";
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (a) out += ',';
    out += std::to_string(coords[a]);
  }
  return out + ")";
}

PointPacker::PointPacker(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ContractError("lattice dimension must be at least 1");
  bits_ = dim > 128 ? 0 : std::min<int>(32, static_cast<int>(128 / dim));
  max_abs_ = bits_ == 0 ? -1 : (std::int64_t{1} << (bits_ - 1)) - 1;
}

std::optional<PackedPoint> PointPacker::pack(std::span<const std::int32_t> coords) const noexcept {
  if (bits_ == 0) return std::nullopt;
  unsigned __int128 acc = 0;
  const std::int64_t bias = max_abs_ + 1;
  for (std::size_t a = 0; a < dim_; ++a) {
    const std::int64_t c = coords[a];
    if (c > max_abs_ || c < -max_abs_) return std::nullopt;
    acc |= static_cast<unsigned __int128>(static_cast<std::uint64_t>(c + bias)) << (static_cast<unsigned>(bits_) * a);
  }
  return PackedPoint{static_cast<std::uint64_t>(acc), static_cast<std::uint64_t>(acc >> 64)};
}

std::size_t CoordVectorHash::operator()(const std::vector<std::int32_t>& v) const noexcept {
  // FNV-1a over the coordinate bytes.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
  for (std::size_t i = 0; i < v.size() * sizeof(std::int32_t); ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

RangeLedger::RangeLedger(std::size_t dim) : packer_(dim) {}

void RangeLedger::reserve(std::size_t n) {
  if (fallback_)
    wide_set_.reserve(n);
  else
    packed_set_.reserve(n);
}

void RangeLedger::migrate() {
  const std::size_t dim = packer_.dim();
  const int bits = packer_.bits_per_coord();
  const std::int64_t bias = packer_.max_abs() + 1;
  const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << bits) - 1;
  wide_set_.reserve(packed_set_.size() * 2);
  for (const auto& p : packed_set_) {
    const unsigned __int128 acc = (static_cast<unsigned __int128>(p.hi) << 64) | p.lo;
    std::vector<std::int32_t> coords(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      const auto u = static_cast<std::int64_t>((acc >> (static_cast<unsigned>(bits) * a)) & mask);
      coords[a] = static_cast<std::int32_t>(u - bias);
    }
    wide_set_.insert(std::move(coords));
  }
  packed_set_.clear();
  fallback_ = true;
}

bool RangeLedger::insert(std::span<const std::int32_t> p) {
  if (p.size() != packer_.dim()) throw ContractError("lattice point dimension mismatch");
  if (!fallback_) {
    if (auto key = packer_.pack(p)) {
      const bool fresh = packed_set_.insert(*key).second;
      count_ += fresh;
      return fresh;
    }
    migrate();
  }
  const bool fresh = wide_set_.emplace(p.begin(), p.end()).second;
  count_ += fresh;
  return fresh;
}

bool RangeLedger::contains(std::span<const std::int32_t> p) const {
  if (p.size() != packer_.dim()) throw ContractError("lattice point dimension mismatch");
  if (!fallback_) {
    auto key = packer_.pack(p);
    return key && packed_set_.count(*key) > 0;
  }
  return wide_set_.count(std::vector<std::int32_t>(p.begin(), p.end())) > 0;
}

}  // namespace brw
