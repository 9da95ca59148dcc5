#ifndef BASKET_RNG_HPP
#define BASKET_RNG_HPP

#include <cstdint>

namespace basket {

// Seed used by every randomized entry point when the caller does not supply
// one; fixed so that default runs are reproducible.
constexpr std::uint64_t kDefaultSeed = 1234567;

// Small counter-style generator (splitmix64). Each (seed, stream) pair gets
// an independent substream, so replicate r of a simulation can be generated
// in isolation and results do not depend on scheduling or worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(seed) ^ mix(stream * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  // Binomial draw by CDF inversion; one uniform per call keeps the stream
  // layout independent of the drawn values.
  int binomial(int n, double p);

 private:
  std::uint64_t state_;
};

}  // namespace basket

#endif
