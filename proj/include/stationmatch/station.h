#ifndef STATIONMATCH_STATION_H_
#define STATIONMATCH_STATION_H_

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stationmatch/geo.h"

namespace stationmatch {

// A (label, lat, lon) triple. Immutable; the constructor enforces a label
// that is non-empty after trimming and an in-range coordinate.
class StationIdentifier {
 public:
  StationIdentifier(std::string label, LatLng pos);
  StationIdentifier(std::string label, double lat, double lon)
      : StationIdentifier(std::move(label), LatLng{lat, lon}) {}

  const std::string& label() const { return _label; }
  LatLng pos() const { return _pos; }
  double lat() const { return _pos.lat; }
  double lon() const { return _pos.lon; }

  // Lexicographic on (label bytes, lat, lon).
  std::strong_ordering operator<=>(const StationIdentifier& o) const;
  bool operator==(const StationIdentifier& o) const = default;

 private:
  std::string _label;
  LatLng _pos;
};

struct StationIdentifierHash {
  std::size_t operator()(const StationIdentifier& s) const;
};

enum class PairClass { NotSimilar = 0, Similar = 1 };

inline int toInt(PairClass c) { return c == PairClass::Similar ? 1 : 0; }
inline PairClass pairClassFromBool(bool similar) {
  return similar ? PairClass::Similar : PairClass::NotSimilar;
}

enum class Provenance { Original, SpicedNegative, SpicedNoise };

// "orig" / "sneg" / "snoise"
std::string_view provenanceName(Provenance p);
std::optional<Provenance> parseProvenance(std::string_view s);

struct StationPair {
  StationIdentifier a;
  StationIdentifier b;
  PairClass cls = PairClass::NotSimilar;
  Provenance provenance = Provenance::Original;
};

// Returns p with side a <= side b under StationIdentifier ordering.
StationPair canonicalOrder(StationPair p);

// Labeled, deduplicated pair set. Pairs are stored in canonical order and
// {a, b} / {b, a} collapse to one entry (the first insertion wins). Every
// identifier referenced by a pair is also registered as a station.
class GroundTruth {
 public:
  // Returns false (and stores nothing) for self-pairs and duplicates.
  bool addPair(StationPair p);
  void addStation(const StationIdentifier& s);

  bool contains(const StationIdentifier& a, const StationIdentifier& b) const;
  const StationPair* find(const StationIdentifier& a,
                          const StationIdentifier& b) const;

  const std::vector<StationPair>& pairs() const { return _pairs; }
  const std::vector<StationIdentifier>& stations() const { return _stations; }

  std::size_t numSimilar() const;
  std::size_t numNotSimilar() const { return _pairs.size() - numSimilar(); }

 private:
  struct KeyHash {
    std::size_t operator()(
        const std::pair<StationIdentifier, StationIdentifier>& k) const;
  };

  std::vector<StationPair> _pairs;
  std::unordered_map<std::pair<StationIdentifier, StationIdentifier>,
                     std::size_t, KeyHash>
      _pairIndex;
  std::vector<StationIdentifier> _stations;
  std::unordered_map<StationIdentifier, std::size_t, StationIdentifierHash>
      _stationIndex;
};

// Ground-truth TSV: label_a, lat_a, lon_a, label_b, lat_b, lon_b,
// class (1/0), provenance (orig/sneg/snoise). Coordinates are written in
// shortest round-trip form. The writer throws FormatError for labels with
// tabs or newlines; the reader throws ParseError with the line number.
void writeGroundTruthTsv(std::ostream& out, const GroundTruth& gt);
void writeGroundTruthTsv(const std::string& path, const GroundTruth& gt);
GroundTruth readGroundTruthTsv(std::istream& in);
GroundTruth readGroundTruthTsv(const std::string& path);

// Shortest round-trip decimal representation.
std::string formatDouble(double v);

// Strict full-field number parsing; nullopt on any trailing garbage.
std::optional<double> parseDouble(std::string_view s);

std::vector<std::string_view> splitTabs(std::string_view line);

// Parses the six identifier columns starting at fields[offset].
StationIdentifier parseIdentifierColumns(
    const std::vector<std::string_view>& fields, std::size_t offset);

}  // namespace stationmatch

#endif  // STATIONMATCH_STATION_H_
