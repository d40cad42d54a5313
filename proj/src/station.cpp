#include "stationmatch/station.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "stationmatch/error.h"

namespace stationmatch {

namespace {

bool isBlank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' &&
        c != '\v') {
      return false;
    }
  }
  return true;
}

std::size_t hashCombine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

void checkLabelWritable(const std::string& label) {
  if (label.find_first_of("\t\n\r") != std::string::npos) {
    throw FormatError("label contains tab or newline: \"" + label + "\"");
  }
}

}  // namespace

// _____________________________________________________________________________
StationIdentifier::StationIdentifier(std::string label, LatLng pos)
    : _label(std::move(label)), _pos(pos) {
  if (isBlank(_label)) {
    throw std::invalid_argument("station label must not be empty");
  }
  checkLatLng(_pos);
}

// _____________________________________________________________________________
std::strong_ordering StationIdentifier::operator<=>(
    const StationIdentifier& o) const {
  if (auto c = _label.compare(o._label); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (_pos.lat != o._pos.lat) {
    return _pos.lat < o._pos.lat ? std::strong_ordering::less
                                 : std::strong_ordering::greater;
  }
  if (_pos.lon != o._pos.lon) {
    return _pos.lon < o._pos.lon ? std::strong_ordering::less
                                 : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

// _____________________________________________________________________________
std::size_t StationIdentifierHash::operator()(
    const StationIdentifier& s) const {
  std::size_t h = std::hash<std::string>()(s.label());
  h = hashCombine(h, std::hash<double>()(s.lat()));
  return hashCombine(h, std::hash<double>()(s.lon()));
}

// _____________________________________________________________________________
std::string_view provenanceName(Provenance p) {
  switch (p) {
    case Provenance::Original:
      return "orig";
    case Provenance::SpicedNegative:
      return "sneg";
    case Provenance::SpicedNoise:
      return "snoise";
  }
  return "orig";
}

// _____________________________________________________________________________
std::optional<Provenance> parseProvenance(std::string_view s) {
  if (s == "orig") return Provenance::Original;
  if (s == "sneg") return Provenance::SpicedNegative;
  if (s == "snoise") return Provenance::SpicedNoise;
  return std::nullopt;
}

// _____________________________________________________________________________
StationPair canonicalOrder(StationPair p) {
  if (p.b < p.a) std::swap(p.a, p.b);
  return p;
}

// _____________________________________________________________________________
std::size_t GroundTruth::KeyHash::operator()(
    const std::pair<StationIdentifier, StationIdentifier>& k) const {
  StationIdentifierHash h;
  return hashCombine(h(k.first), h(k.second));
}

// _____________________________________________________________________________
bool GroundTruth::addPair(StationPair p) {
  if (p.a == p.b) return false;
  p = canonicalOrder(std::move(p));
  auto key = std::make_pair(p.a, p.b);
  if (_pairIndex.count(key)) return false;
  _pairIndex.emplace(std::move(key), _pairs.size());
  addStation(p.a);
  addStation(p.b);
  _pairs.push_back(std::move(p));
  return true;
}

// _____________________________________________________________________________
void GroundTruth::addStation(const StationIdentifier& s) {
  if (_stationIndex.count(s)) return;
  _stationIndex.emplace(s, _stations.size());
  _stations.push_back(s);
}

// _____________________________________________________________________________
const StationPair* GroundTruth::find(const StationIdentifier& a,
                                     const StationIdentifier& b) const {
  auto key = b < a ? std::make_pair(b, a) : std::make_pair(a, b);
  auto it = _pairIndex.find(key);
  if (it == _pairIndex.end()) return nullptr;
  return &_pairs[it->second];
}

// _____________________________________________________________________________
bool GroundTruth::contains(const StationIdentifier& a,
                           const StationIdentifier& b) const {
  return find(a, b) != nullptr;
}

// _____________________________________________________________________________
std::size_t GroundTruth::numSimilar() const {
  std::size_t n = 0;
  for (const auto& p : _pairs) n += p.cls == PairClass::Similar;
  return n;
}

// _____________________________________________________________________________
std::string formatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// _____________________________________________________________________________
std::optional<double> parseDouble(std::string_view s) {
  double v = 0;
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return v;
}

// _____________________________________________________________________________
std::vector<std::string_view> splitTabs(std::string_view line) {
  std::vector<std::string_view> ret;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      ret.push_back(line.substr(start));
      return ret;
    }
    ret.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// _____________________________________________________________________________
StationIdentifier parseIdentifierColumns(
    const std::vector<std::string_view>& fields, std::size_t offset) {
  if (fields.size() < offset + 3)
    throw ParseError("missing identifier columns");
  auto lat = parseDouble(fields[offset + 1]);
  auto lon = parseDouble(fields[offset + 2]);
  if (!lat || !lon) {
    throw ParseError("invalid coordinate '" + std::string(fields[offset + 1]) +
                     "', '" + std::string(fields[offset + 2]) + "'");
  }
  try {
    return StationIdentifier(std::string(fields[offset]), *lat, *lon);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

// _____________________________________________________________________________
void writeGroundTruthTsv(std::ostream& out, const GroundTruth& gt) {
  for (const auto& p : gt.pairs()) {
    checkLabelWritable(p.a.label());
    checkLabelWritable(p.b.label());
    out << p.a.label() << '\t' << formatDouble(p.a.lat()) << '\t'
        << formatDouble(p.a.lon()) << '\t' << p.b.label() << '\t'
        << formatDouble(p.b.lat()) << '\t' << formatDouble(p.b.lon()) << '\t'
        << toInt(p.cls) << '\t' << provenanceName(p.provenance) << '\n';
  }
}

// _____________________________________________________________________________
void writeGroundTruthTsv(const std::string& path, const GroundTruth& gt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writeGroundTruthTsv(out, gt);
  if (!out) throw IoError("failed writing '" + path + "'");
}

// _____________________________________________________________________________
GroundTruth readGroundTruthTsv(std::istream& in) {
  GroundTruth gt;
  std::string line;
  std::size_t lineNo = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::size_t lineStart = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = splitTabs(line);
    try {
      if (fields.size() != 8) {
        throw ParseError("expected 8 columns, got " +
                         std::to_string(fields.size()));
      }
      StationPair p{parseIdentifierColumns(fields, 0),
                    parseIdentifierColumns(fields, 3)};
      if (fields[6] == "1") {
        p.cls = PairClass::Similar;
      } else if (fields[6] == "0") {
        p.cls = PairClass::NotSimilar;
      } else {
        throw ParseError("class must be 0 or 1");
      }
      auto prov = parseProvenance(fields[7]);
      if (!prov) throw ParseError("unknown provenance '" +
                                  std::string(fields[7]) + "'");
      p.provenance = *prov;
      gt.addPair(std::move(p));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineNo) + ": " + e.what(),
                       lineStart);
    }
  }
  return gt;
}

// _____________________________________________________________________________
GroundTruth readGroundTruthTsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return readGroundTruthTsv(in);
}

}  // namespace stationmatch
