#pragma once

// Counter-free splittable random streams.
//
// Every replica owns a 64-bit seed. Independent sub-streams are derived from
// it by hashing (seed, tag) through splitmix64 and seeding a xoshiro256**
// generator with the result, so a stream's output depends only on the seed
// and its tag, never on scheduling.

#include <bit>
#include <cstdint>

namespace brw {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// One-shot mix of a value, used to derive sub-stream seeds.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t s = x;
  return splitmix64_next(s);
}

/// xoshiro256** by Blackman and Vigna.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed = 0) noexcept { reseed(seed); }

  void reseed(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  /// Exact uniform integer in [0, range) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t range) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t s_[4];
};

/// Fair coin flips served 64 at a time.
class BitSource {
 public:
  explicit BitSource(Xoshiro256& gen) noexcept : gen_(&gen) {}

  bool next() noexcept {
    if (left_ == 0) {
      word_ = (*gen_)();
      left_ = 64;
    }
    const bool bit = word_ & 1U;
    word_ >>= 1;
    --left_;
    return bit;
  }

 private:
  Xoshiro256* gen_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

/// Offspring count with law mu(k) = 2^{-k-1}: the run length of one-bits.
inline std::uint32_t geometric_half(Xoshiro256& gen) noexcept {
  std::uint32_t total = 0;
  for (;;) {
    const std::uint64_t w = gen();
    const auto ones = static_cast<std::uint32_t>(std::countr_one(w));
    total += ones;
    if (ones < 64) return total;
  }
}

/// Tags naming the independent sub-streams of one replica.
enum class StreamTag : std::uint64_t {
  ContourForward = 1,
  ContourBackward = 2,
  DisplacementForward = 3,
  DisplacementBackward = 4,
  Auxiliary = 5,
};

inline Xoshiro256 substream(std::uint64_t seed, StreamTag tag) noexcept {
  return Xoshiro256(mix64(seed ^ mix64(static_cast<std::uint64_t>(tag) * 0xd1b54a32d192ed03ULL)));
}

/// The four generator streams that determine one trajectory.
struct SnakeStreams {
  Xoshiro256 contour_fwd;
  Xoshiro256 contour_back;
  Xoshiro256 disp_fwd;
  Xoshiro256 disp_back;

  explicit SnakeStreams(std::uint64_t seed) noexcept
      : contour_fwd(substream(seed, StreamTag::ContourForward)),
        contour_back(substream(seed, StreamTag::ContourBackward)),
        disp_fwd(substream(seed, StreamTag::DisplacementForward)),
        disp_back(substream(seed, StreamTag::DisplacementBackward)) {}
};

}  // namespace brw
