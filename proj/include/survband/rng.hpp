#pragma once

#include <cstdint>
#include <random>

namespace survband {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed-sequence adapter that fills engine state from a splitmix64 chain.
struct SplitmixSeq {
  std::uint64_t s;
  using result_type = std::uint32_t;
  template <class It>
  void generate(It first, It last) {
    std::uint64_t x = s;
    while (first != last) {
      std::uint64_t w = splitmix64(x);
      *first++ = static_cast<std::uint32_t>(w);
      if (first == last) break;
      *first++ = static_cast<std::uint32_t>(w >> 32);
    }
  }
};
}  // namespace detail

// Seeded generator with addressable substreams: substream(k) depends only on
// (seed, stream-path, k), never on how much the parent has been consumed.
// This is what makes bootstrap replicates and simulation runs reproducible
// under any execution order or degree of parallelism.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), eng_(make_engine(seed, stream)) {}

  Rng substream(std::uint64_t k) const {
    std::uint64_t x = stream_ ^ (0x9e3779b97f4a7c15ULL + k);
    std::uint64_t child = detail::splitmix64(x);
    return Rng(seed_, child);
  }

  // Uniform draw in (0,1), never exactly 0 or 1.
  double uniform01() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed;
    std::uint64_t mixed = detail::splitmix64(x) ^ stream;
    detail::SplitmixSeq seq{mixed};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 eng_;
};

}  // namespace survband
