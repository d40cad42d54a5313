#ifndef STATIONMATCH_TESTS_SUPPORT_SYNTHETIC_CITY_H_
#define STATIONMATCH_TESTS_SUPPORT_SYNTHETIC_CITY_H_

#include <cstdint>
#include <string>

#include "stationmatch/geo.h"

namespace stationmatch::testing {

// Deterministic stand-in for a single-city OSM extract. Stations are
// stop_areas of 1-8 nodes scattered around a center; nodes carry label
// variants of the station name (abbreviations, city prefixes, platform
// suffixes, spelling variants, occasional typos) spread over several label
// attributes. Also emits orphan stops, stop_area_groups of adjacent
// stations, nearby stations sharing a street name, distant stations with
// identical names and non-station nodes.
struct CityConfig {
  std::uint64_t seed = 1;
  LatLng center{47.995, 7.85};
  double extentM = 9000;  // side of the square the city covers
  int numStations = 300;
  int numOrphans = 200;
  int numGroups = 10;
  double minSpacingM = 150;  // between station centers, except junctions
  // Share of stations placed at a crossing next to an existing station,
  // 40-150 m away, under a different name.
  double junctionShare = 0.15;
  double nodeSigmaM = 22;    // per-axis spread of a station's nodes
  std::string city = "Freiburg";
};

std::string syntheticCityOsm(const CityConfig& cfg);

}  // namespace stationmatch::testing

#endif  // STATIONMATCH_TESTS_SUPPORT_SYNTHETIC_CITY_H_
