#ifndef STATIONMATCH_RANDOM_H_
#define STATIONMATCH_RANDOM_H_

#include <cstdint>
#include <random>

namespace stationmatch {

// Seedable generator used everywhere randomness enters the pipeline.
//
// The engine is std::mt19937_64 seeded with SplitMix64(seed). The standard
// library distributions are implementation-defined, so all derived values
// are computed here:
//   below(n)  - rejection sampling on the raw 64-bit output
//   uniform() - top 53 bits scaled to [0, 1)
//   normal()  - Box-Muller on two uniform() draws, no caching
// substream(i) returns an independent generator seeded with
// SplitMix64(seed ^ (i + 1) * 0x9E3779B97F4A7C15), used for per-tree and
// per-repetition streams so results do not depend on thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return _engine(); }
  std::uint64_t below(std::uint64_t n);
  double uniform();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  Rng substream(std::uint64_t index) const;
  std::uint64_t seed() const { return _seed; }

  // Fisher-Yates using below().
  template <typename It>
  void shuffle(It first, It last) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      auto j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::uint64_t _seed;
  std::mt19937_64 _engine;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace stationmatch

#endif  // STATIONMATCH_RANDOM_H_
