#include "stationmatch/random.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace stationmatch {

// _____________________________________________________________________________
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// _____________________________________________________________________________
Rng::Rng(std::uint64_t seed) : _seed(seed), _engine(splitmix64(seed)) {}

// _____________________________________________________________________________
std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t v;
  do {
    v = _engine();
  } while (v > limit);
  return v % n;
}

// _____________________________________________________________________________
double Rng::uniform() {
  return static_cast<double>(_engine() >> 11) * 0x1.0p-53;
}

// _____________________________________________________________________________
double Rng::normal() {
  double u1 = uniform();
  double u2 = uniform();
  // 1 - u1 is in (0, 1], keeps log finite
  return std::sqrt(-2.0 * std::log(1.0 - u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// _____________________________________________________________________________
Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(_seed ^ ((index + 1) * 0x9E3779B97F4A7C15ULL)));
}

}  // namespace stationmatch
