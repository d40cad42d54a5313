#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "stationmatch/osm.h"

namespace stationmatch {

namespace {

constexpr std::size_t kNoArea = static_cast<std::size_t>(-1);

// Uniform lat/lon bucket grid with cells at least `radius` wide everywhere
// in the data set, so all neighbours within radius are in the 3x3 block.
class SpatialHash {
 public:
  SpatialHash(const std::vector<LatLng>& points, double radius) {
    double maxLat = 0;
    for (auto p : points) maxLat = std::max(maxLat, std::fabs(p.lat));
    _latCell = std::max(radius / kMetersPerDegree, 1e-9);
    double edge = std::min(maxLat + _latCell, 90.0);
    double cosLat = std::cos(edge * std::numbers::pi / 180);
    // 5% slack: a short great circle is not exactly an east-west line
    _lonCell = std::max(
        1.05 * radius / (kMetersPerDegree * std::max(cosLat, 1e-9)), 1e-9);
    _cols = _lonCell >= 120 ? 1 : static_cast<std::int64_t>(360 / _lonCell);
    _lonCell = 360.0 / _cols;
    for (std::size_t i = 0; i < points.size(); ++i) {
      _cells[key(row(points[i]), col(points[i]))].push_back(i);
    }
  }

  // Indices of points in the 3x3 block around p, each once, ascending.
  std::vector<std::size_t> candidates(LatLng p) const {
    std::vector<std::size_t> ret;
    auto r0 = row(p);
    auto c0 = col(p);
    std::vector<std::int64_t> cols;
    for (int dc = -1; dc <= 1; ++dc) {
      cols.push_back(((c0 + dc) % _cols + _cols) % _cols);
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (int dr = -1; dr <= 1; ++dr) {
      for (auto c : cols) {
        auto it = _cells.find(key(r0 + dr, c));
        if (it == _cells.end()) continue;
        ret.insert(ret.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(ret.begin(), ret.end());
    return ret;
  }

 private:
  std::int64_t row(LatLng p) const {
    return static_cast<std::int64_t>(std::floor((p.lat + 90) / _latCell));
  }
  std::int64_t col(LatLng p) const {
    auto c = static_cast<std::int64_t>(std::floor((p.lon + 180) / _lonCell));
    return std::min(c, _cols - 1);
  }
  std::int64_t key(std::int64_t r, std::int64_t c) const {
    return r * (_cols + 1) + c;
  }

  double _latCell, _lonCell;
  std::int64_t _cols;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> _cells;
};

// Primary stop_area per node (first in document order) and the groups each
// stop_area belongs to.
struct Membership {
  std::vector<std::size_t> area;
  std::vector<std::vector<std::size_t>> areaGroups;  // sorted

  Membership(const OsmData& osm) : area(osm.nodes.size(), kNoArea) {
    std::unordered_map<std::int64_t, std::size_t> nodeIdx, areaIdx;
    for (std::size_t i = 0; i < osm.nodes.size(); ++i) {
      nodeIdx.emplace(osm.nodes[i].id, i);
    }
    for (std::size_t a = 0; a < osm.stopAreas.size(); ++a) {
      areaIdx.emplace(osm.stopAreas[a].id, a);
      for (auto m : osm.stopAreas[a].members) {
        auto it = nodeIdx.find(m);
        if (it != nodeIdx.end() && area[it->second] == kNoArea) {
          area[it->second] = a;
        }
      }
    }
    areaGroups.resize(osm.stopAreas.size());
    for (std::size_t g = 0; g < osm.groups.size(); ++g) {
      for (auto m : osm.groups[g].members) {
        auto it = areaIdx.find(m);
        if (it != areaIdx.end()) areaGroups[it->second].push_back(g);
      }
    }
    for (auto& gs : areaGroups) {
      std::sort(gs.begin(), gs.end());
      gs.erase(std::unique(gs.begin(), gs.end()), gs.end());
    }
  }

  bool shareGroup(std::size_t a, std::size_t b) const {
    const auto& x = areaGroups[a];
    const auto& y = areaGroups[b];
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] == y[j]) return true;
      if (x[i] < y[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    return false;
  }
};

}  // namespace

// _____________________________________________________________________________
GroundTruth buildPairs(const OsmData& osm, const PairConfig& cfg) {
  if (!(cfg.radius > 0)) throw std::invalid_argument("radius must be > 0");
  if (cfg.sameNameRadius < 0) {
    throw std::invalid_argument("same-name radius must be >= 0");
  }
  Membership mem(osm);

  std::vector<std::vector<StationIdentifier>> ids(osm.nodes.size());
  std::vector<LatLng> pos(osm.nodes.size());
  for (std::size_t i = 0; i < osm.nodes.size(); ++i) {
    const StopArea* area =
        mem.area[i] == kNoArea ? nullptr : &osm.stopAreas[mem.area[i]];
    ids[i] = expandIdentifiers(osm.nodes[i], area);
    pos[i] = osm.nodes[i].pos;
  }

  // Similar pairs go in first so that they win over a NotSimilar pair for
  // the same identifiers (possible when two nodes share label and position).
  std::vector<StationPair> similar, notSimilar;
  auto emitAll = [](const std::vector<StationIdentifier>& x,
                    const std::vector<StationIdentifier>& y, PairClass cls,
                    std::vector<StationPair>& out) {
    for (const auto& a : x) {
      for (const auto& b : y) out.push_back({a, b, cls, Provenance::Original});
    }
  };

  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t x = 0; x < ids[i].size(); ++x) {
      for (std::size_t y = x + 1; y < ids[i].size(); ++y) {
        similar.push_back(
            {ids[i][x], ids[i][y], PairClass::Similar, Provenance::Original});
      }
    }
  }

  SpatialHash hash(pos, cfg.radius);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i].empty() || mem.area[i] == kNoArea) continue;
    for (auto j : hash.candidates(pos[i])) {
      if (j <= i || ids[j].empty() || mem.area[j] == kNoArea) continue;
      double d = geoDistance(pos[i], pos[j]);
      if (d > cfg.radius) continue;
      std::size_t ai = mem.area[i], aj = mem.area[j];
      if (ai == aj) {
        emitAll(ids[i], ids[j], PairClass::Similar, similar);
        continue;
      }
      if (mem.shareGroup(ai, aj)) continue;
      for (const auto& a : ids[i]) {
        for (const auto& b : ids[j]) {
          if (d < cfg.sameNameRadius && a.label() == b.label()) continue;
          notSimilar.push_back({a, b, PairClass::NotSimilar,
                                Provenance::Original});
        }
      }
    }
  }

  GroundTruth gt;
  for (auto& node : ids) {
    for (auto& s : node) gt.addStation(s);
  }
  for (auto& p : similar) gt.addPair(std::move(p));
  for (auto& p : notSimilar) gt.addPair(std::move(p));
  return gt;
}

// _____________________________________________________________________________
DatasetStats datasetStats(const OsmData& osm, const GroundTruth& gt) {
  Membership mem(osm);
  DatasetStats s;
  for (std::size_t i = 0; i < osm.nodes.size(); ++i) {
    const StopArea* area =
        mem.area[i] == kNoArea ? nullptr : &osm.stopAreas[mem.area[i]];
    if (expandIdentifiers(osm.nodes[i], area).empty()) continue;
    ++s.stations;
    if (!area) ++s.orphans;
  }
  s.groups = osm.stopAreas.size();
  std::size_t members = 0;
  for (const auto& a : osm.stopAreas) members += a.members.size();
  s.avgGroupSize = s.groups ? static_cast<double>(members) / s.groups : 0;
  s.identifiers = gt.stations().size();

  double sum = 0;
  for (const auto& p : gt.pairs()) {
    if (p.cls == PairClass::Similar) {
      ++s.numSimilar;
      sum += geoDistance(p.a.pos(), p.b.pos());
    } else {
      ++s.numNotSimilar;
    }
  }
  s.avgPositiveDistance = s.numSimilar ? sum / s.numSimilar : 0;
  return s;
}

// _____________________________________________________________________________
std::string formatStats(const DatasetStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "N\t%zu\nG\t%zu\nN'\t%zu\n|s|\t%zu\ng\t%.2f\nd+\t%.1f\n"
                "K-\t%zu\nK+\t%zu\nK\t%zu\n",
                s.stations, s.groups, s.orphans, s.identifiers, s.avgGroupSize,
                s.avgPositiveDistance, s.numNotSimilar, s.numSimilar,
                s.numNotSimilar + s.numSimilar);
  return buf;
}

}  // namespace stationmatch
