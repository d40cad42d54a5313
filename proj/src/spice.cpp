#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include "stationmatch/error.h"
#include "stationmatch/osm.h"
#include "stationmatch/random.h"

namespace stationmatch {

// _____________________________________________________________________________
void SpicingConfig::validate() const {
  if (!(p >= 0 && p <= 1)) {
    throw std::invalid_argument("spicing probability must be in [0, 1]");
  }
  if (nFakes < 0) throw std::invalid_argument("n_fakes must be >= 0");
  if (!(fakeRadius >= 0) || !(noiseSigma >= 0) || !(searchRadius >= 0)) {
    throw std::invalid_argument("spicing distances must be >= 0");
  }
}

namespace {

// nFakes distinct indices of identifiers farther than radius from anchor.
// Rejection sampling first; if that stalls (dense data, small set), fall back
// to drawing from the explicit list of eligible donors.
std::vector<std::size_t> drawDonors(const std::vector<StationIdentifier>& ids,
                                    const StationIdentifier& anchor,
                                    const SpicingConfig& cfg, Rng& rng) {
  std::vector<std::size_t> chosen;
  auto far = [&](std::size_t i) {
    return geoDistance(ids[i].pos(), anchor.pos()) > cfg.searchRadius;
  };
  auto taken = [&](std::size_t i) {
    return std::find(chosen.begin(), chosen.end(), i) != chosen.end();
  };
  const std::size_t want = static_cast<std::size_t>(cfg.nFakes);
  for (std::size_t tries = 0; chosen.size() < want && tries < 32 * want;
       ++tries) {
    auto i = rng.below(ids.size());
    if (far(i) && !taken(i)) chosen.push_back(i);
  }
  if (chosen.size() == want) return chosen;

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (far(i) && !taken(i)) eligible.push_back(i);
  }
  if (chosen.size() + eligible.size() < want) {
    throw Error("cannot spice '" + anchor.label() + "': only " +
                std::to_string(chosen.size() + eligible.size()) +
                " identifiers farther than " + formatDouble(cfg.searchRadius) +
                " m, need " + std::to_string(want));
  }
  while (chosen.size() < want) {
    auto k = rng.below(eligible.size());
    chosen.push_back(eligible[k]);
    eligible[k] = eligible.back();
    eligible.pop_back();
  }
  return chosen;
}

}  // namespace

// _____________________________________________________________________________
GroundTruth spice(const GroundTruth& gt, const SpicingConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto& ids = gt.stations();

  std::vector<StationPair> negatives;
  for (const auto& anchor : ids) {
    if (!rng.bernoulli(cfg.p) || cfg.nFakes == 0) continue;
    for (auto d : drawDonors(ids, anchor, cfg, rng)) {
      double r = cfg.fakeRadius * std::sqrt(rng.uniform());
      double theta = 2 * std::numbers::pi * rng.uniform();
      LatLng pos = offsetMeters(anchor.pos(), r * std::cos(theta),
                                r * std::sin(theta));
      negatives.push_back({anchor, StationIdentifier(ids[d].label(), pos),
                           PairClass::NotSimilar, Provenance::SpicedNegative});
    }
  }

  GroundTruth out;
  for (const auto& s : ids) out.addStation(s);
  for (const auto& p : gt.pairs()) {
    bool jitter = p.cls == PairClass::Similar &&
                  p.provenance == Provenance::Original && rng.bernoulli(cfg.p);
    if (!jitter) {
      out.addPair(p);
      continue;
    }
    bool sideA = rng.bernoulli(0.5);
    double east = cfg.noiseSigma * rng.normal();
    double north = cfg.noiseSigma * rng.normal();
    const auto& moved = sideA ? p.a : p.b;
    StationIdentifier noisy(moved.label(),
                            offsetMeters(moved.pos(), east, north));
    StationPair q{sideA ? noisy : p.a, sideA ? p.b : noisy, p.cls,
                  Provenance::SpicedNoise};
    // a jitter that collides with another pair keeps the original
    if (!out.addPair(std::move(q))) out.addPair(p);
  }
  for (auto& p : negatives) out.addPair(std::move(p));
  return out;
}

}  // namespace stationmatch
