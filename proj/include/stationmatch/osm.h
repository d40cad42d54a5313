#ifndef STATIONMATCH_OSM_H_
#define STATIONMATCH_OSM_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stationmatch/geo.h"
#include "stationmatch/station.h"

namespace stationmatch {

// Label attributes read from station nodes and stop_area relations, in the
// order identifiers are generated.
inline constexpr std::array<std::string_view, 9> kLabelAttributes = {
    "name",      "ref_name", "uic_name",   "official_name", "alt_name",
    "loc_name",  "reg_name", "short_name", "gtfs_name"};

using LabelList = std::vector<std::pair<std::string, std::string>>;

struct OsmStationNode {
  std::int64_t id = 0;
  LatLng pos;
  LabelList labels;  // (attribute, value), kLabelAttributes order
};

struct StopArea {
  std::int64_t id = 0;
  std::vector<std::int64_t> members;  // station node ids
  LabelList labels;
};

struct StopAreaGroup {
  std::int64_t id = 0;
  std::vector<std::int64_t> members;  // stop_area relation ids
};

struct OsmData {
  std::vector<OsmStationNode> nodes;
  std::vector<StopArea> stopAreas;
  std::vector<StopAreaGroup> groups;
};

// Which nodes count as stations. A node matches if any (key, value) pair is
// among its tags.
struct StationFilter {
  std::vector<std::pair<std::string, std::string>> tags = {
      {"public_transport", "station"},
      {"public_transport", "halt"},
      {"public_transport", "stop_position"},
      {"public_transport", "platform"},
      {"railway", "station"},
      {"railway", "halt"},
      {"railway", "tram_stop"},
      {"highway", "bus_stop"}};

  bool matches(std::string_view key, std::string_view value) const;

  // Comma-separated "key=value" list. Throws ConfigError.
  static StationFilter parse(std::string_view spec);
  std::string toString() const;
};

// Streaming parse of OSM XML. Only matching nodes are retained. Relation
// members that are not retained station nodes (or, for groups, not
// stop_areas) are dropped, as are relations left without members. Label
// values have tabs and line breaks replaced by spaces and are trimmed.
// Throws ParseError (with byte offset) on malformed XML or bad coordinates.
OsmData parseOsm(std::istream& in, const StationFilter& filter = {});
OsmData parseOsmFile(const std::string& path,
                     const StationFilter& filter = {});

// One identifier per distinct label of the node, followed by the enclosing
// stop_area's labels the node does not already carry. All at the node's
// position.
std::vector<StationIdentifier> expandIdentifiers(const OsmStationNode& node,
                                                 const StopArea* enclosing);

struct PairConfig {
  double radius = 1000;         // meters; pairs farther apart are not emitted
  double sameNameRadius = 250;  // equal labels closer than this are skipped
};

// Labeled pairs from stop_area membership:
//  - identifiers of one node, or of nodes in the same stop_area: Similar
//  - nodes in different stop_areas: NotSimilar, unless both areas share a
//    stop_area_group or the labels are byte-equal and < sameNameRadius
//  - nodes outside every stop_area only pair with themselves
// A node in several stop_areas belongs to the first one in document order.
// Every generated identifier is registered as a station, even if unpaired.
GroundTruth buildPairs(const OsmData& osm, const PairConfig& cfg = {});

struct DatasetStats {
  std::size_t stations = 0;             // N, nodes yielding identifiers
  std::size_t groups = 0;               // G, stop_areas
  std::size_t orphans = 0;              // N'
  std::size_t identifiers = 0;          // |s|
  double avgGroupSize = 0;              // g, station nodes per stop_area
  double avgPositiveDistance = 0;       // d+, meters
  std::size_t numNotSimilar = 0;        // K-
  std::size_t numSimilar = 0;           // K+
};

DatasetStats datasetStats(const OsmData& osm, const GroundTruth& gt);
std::string formatStats(const DatasetStats& s);

struct SpicingConfig {
  double p = 0.5;
  int nFakes = 5;
  double fakeRadius = 100;    // meters around the anchor
  double noiseSigma = 100;    // meters, per axis
  double searchRadius = 1000; // donors must be farther than this
  std::uint64_t seed = 0;

  void validate() const;
};

// Adds far-away identifiers moved next to an anchor as NotSimilar pairs and
// jitters one side of Similar pairs. Original pairs keep their order (a
// jittered pair replaces its original), spiced negatives follow. Throws
// Error if an anchor has fewer than nFakes identifiers beyond the radius.
GroundTruth spice(const GroundTruth& gt, const SpicingConfig& cfg);

}  // namespace stationmatch

#endif  // STATIONMATCH_OSM_H_
