#pragma once

#include <cstdint>

namespace crsim {

// Per-round random stream derived from (seed, round index) alone.  Any
// partition of rounds across workers replays the exact same draws, which is
// what makes parallel runs bit-identical to sequential ones.
class RoundRng {
 public:
  RoundRng(std::uint64_t seed, std::uint64_t round)
      : state_(mix(mix(seed ^ 0x6A09E667F3BCC909ULL) + round)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n); n >= 1
  std::uint32_t next_below(std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace crsim
