#include "stationmatch/osm.h"

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "stationmatch/error.h"

namespace stationmatch {

// _____________________________________________________________________________
bool StationFilter::matches(std::string_view key,
                            std::string_view value) const {
  for (const auto& [k, v] : tags) {
    if (k == key && v == value) return true;
  }
  return false;
}

// _____________________________________________________________________________
StationFilter StationFilter::parse(std::string_view spec) {
  StationFilter f;
  f.tags.clear();
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view item = spec.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
        throw ConfigError("station tag '" + std::string(item) +
                          "' is not of the form key=value");
      }
      f.tags.emplace_back(std::string(item.substr(0, eq)),
                          std::string(item.substr(eq + 1)));
    }
    pos = end + 1;
  }
  if (f.tags.empty()) throw ConfigError("empty station tag list");
  return f;
}

// _____________________________________________________________________________
std::string StationFilter::toString() const {
  std::string ret;
  for (const auto& [k, v] : tags) {
    if (!ret.empty()) ret += ',';
    ret += k + "=" + v;
  }
  return ret;
}

namespace {

std::string cleanLabel(std::string_view raw) {
  std::string s(raw);
  for (auto& c : s) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  auto b = s.find_first_not_of(' ');
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(' ');
  return s.substr(b, e - b + 1);
}

using Tags = std::vector<std::pair<std::string, std::string>>;

LabelList labelsFromTags(const Tags& tags) {
  LabelList ret;
  for (auto attr : kLabelAttributes) {
    for (const auto& [k, v] : tags) {
      if (k != attr) continue;
      auto label = cleanLabel(v);
      if (!label.empty()) ret.emplace_back(std::string(attr), label);
      break;
    }
  }
  return ret;
}

const std::string* findTag(const Tags& tags, std::string_view key) {
  for (const auto& [k, v] : tags) {
    if (k == key) return &v;
  }
  return nullptr;
}

const char* findAttr(const XML_Char** attrs, const char* name) {
  for (int i = 0; attrs[i]; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

struct RawRelation {
  std::int64_t id = 0;
  std::vector<std::pair<char, std::int64_t>> members;  // 'n' / 'r', ref
  Tags tags;
};

class OsmHandler {
 public:
  OsmHandler(XML_Parser parser, const StationFilter& filter)
      : _parser(parser), _filter(filter) {}

  static void onStart(void* self, const XML_Char* name,
                      const XML_Char** attrs) {
    auto* h = static_cast<OsmHandler*>(self);
    if (h->_error) return;
    try {
      h->start(name, attrs);
    } catch (...) {
      h->_error = std::current_exception();
      XML_StopParser(h->_parser, XML_FALSE);
    }
  }

  static void onEnd(void* self, const XML_Char* name) {
    auto* h = static_cast<OsmHandler*>(self);
    if (h->_error) return;
    try {
      h->end(name);
    } catch (...) {
      h->_error = std::current_exception();
      XML_StopParser(h->_parser, XML_FALSE);
    }
  }

  std::exception_ptr error() const { return _error; }
  OsmData finish();

 private:
  std::size_t offset() const {
    return static_cast<std::size_t>(XML_GetCurrentByteIndex(_parser));
  }

  std::int64_t parseId(const char* v, const char* what) const {
    if (!v) throw ParseError(std::string(what) + " without id", offset());
    std::int64_t id = 0;
    std::string_view s(v);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw ParseError(std::string("invalid ") + what + " id '" + v + "'",
                       offset());
    }
    return id;
  }

  void start(const char* name, const XML_Char** attrs) {
    if (std::strcmp(name, "node") == 0) {
      _inNode = true;
      _nodeTags.clear();
      _nodeOffset = offset();
      _nodeId = parseId(findAttr(attrs, "id"), "node");
      const char* lat = findAttr(attrs, "lat");
      const char* lon = findAttr(attrs, "lon");
      _nodeLat = lat ? lat : "";
      _nodeLon = lon ? lon : "";
    } else if (std::strcmp(name, "relation") == 0) {
      _inRelation = true;
      _relation = RawRelation();
      _relation.id = parseId(findAttr(attrs, "id"), "relation");
    } else if (std::strcmp(name, "tag") == 0) {
      const char* k = findAttr(attrs, "k");
      const char* v = findAttr(attrs, "v");
      if (!k || !v) return;
      if (_inNode) _nodeTags.emplace_back(k, v);
      if (_inRelation) _relation.tags.emplace_back(k, v);
    } else if (std::strcmp(name, "member") == 0 && _inRelation) {
      const char* type = findAttr(attrs, "type");
      const char* ref = findAttr(attrs, "ref");
      if (!type || !ref) return;
      char t = std::strcmp(type, "node") == 0       ? 'n'
               : std::strcmp(type, "relation") == 0 ? 'r'
                                                     : 0;
      if (t) _relation.members.emplace_back(t, parseId(ref, "member"));
    }
  }

  void end(const char* name) {
    if (std::strcmp(name, "node") == 0) {
      _inNode = false;
      bool station = false;
      for (const auto& [k, v] : _nodeTags) {
        if (_filter.matches(k, v)) {
          station = true;
          break;
        }
      }
      if (!station) return;
      auto lat = parseDouble(_nodeLat);
      auto lon = parseDouble(_nodeLon);
      if (!lat || !lon || !validLatLng({*lat, *lon})) {
        throw ParseError("invalid coordinates for node " +
                             std::to_string(_nodeId),
                         _nodeOffset);
      }
      _data.nodes.push_back(
          {_nodeId, {*lat, *lon}, labelsFromTags(_nodeTags)});
    } else if (std::strcmp(name, "relation") == 0) {
      _inRelation = false;
      const std::string* pt = findTag(_relation.tags, "public_transport");
      if (!pt) return;
      if (*pt == "stop_area") {
        _areas.push_back(std::move(_relation));
      } else if (*pt == "stop_area_group") {
        _groups.push_back(std::move(_relation));
      }
    }
  }

  XML_Parser _parser;
  const StationFilter& _filter;
  std::exception_ptr _error;

  bool _inNode = false;
  std::int64_t _nodeId = 0;
  std::size_t _nodeOffset = 0;
  std::string _nodeLat, _nodeLon;
  Tags _nodeTags;

  bool _inRelation = false;
  RawRelation _relation;

  OsmData _data;
  std::vector<RawRelation> _areas, _groups;
};

// _____________________________________________________________________________
OsmData OsmHandler::finish() {
  // duplicate node ids (e.g. concatenated extracts): keep the first
  std::unordered_set<std::int64_t> nodeIds;
  std::vector<OsmStationNode> nodes;
  for (auto& n : _data.nodes) {
    if (nodeIds.insert(n.id).second) nodes.push_back(std::move(n));
  }
  _data.nodes = std::move(nodes);

  std::unordered_set<std::int64_t> areaIds;
  for (auto& r : _areas) {
    if (areaIds.count(r.id)) continue;
    StopArea a{r.id, {}, labelsFromTags(r.tags)};
    std::unordered_set<std::int64_t> seen;
    for (auto [type, ref] : r.members) {
      if (type == 'n' && nodeIds.count(ref) && seen.insert(ref).second) {
        a.members.push_back(ref);
      }
    }
    if (a.members.empty()) continue;
    areaIds.insert(a.id);
    _data.stopAreas.push_back(std::move(a));
  }

  std::unordered_set<std::int64_t> groupIds;
  for (auto& r : _groups) {
    if (groupIds.count(r.id)) continue;
    StopAreaGroup g{r.id, {}};
    std::unordered_set<std::int64_t> seen;
    for (auto [type, ref] : r.members) {
      if (type == 'r' && areaIds.count(ref) && seen.insert(ref).second) {
        g.members.push_back(ref);
      }
    }
    if (g.members.empty()) continue;
    groupIds.insert(g.id);
    _data.groups.push_back(std::move(g));
  }
  return std::move(_data);
}

}  // namespace

// _____________________________________________________________________________
OsmData parseOsm(std::istream& in, const StationFilter& filter) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)>
      parser(XML_ParserCreate(nullptr), &XML_ParserFree);
  if (!parser) throw Error("cannot create XML parser");

  OsmHandler handler(parser.get(), filter);
  XML_SetUserData(parser.get(), &handler);
  XML_SetElementHandler(parser.get(), &OsmHandler::onStart,
                        &OsmHandler::onEnd);

  std::vector<char> buf(1 << 16);
  bool first = true;
  for (;;) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    auto n = in.gcount();
    bool last = n < static_cast<std::streamsize>(buf.size());
    if (in.bad()) throw IoError("read error on OSM input");
    // an empty input is an empty document, not an XML error
    if (first && n == 0) return {};
    first = false;
    if (XML_Parse(parser.get(), buf.data(), static_cast<int>(n), last) ==
        XML_STATUS_ERROR) {
      if (handler.error()) std::rethrow_exception(handler.error());
      throw ParseError(
          std::string("malformed OSM XML: ") +
              XML_ErrorString(XML_GetErrorCode(parser.get())),
          static_cast<std::size_t>(XML_GetCurrentByteIndex(parser.get())));
    }
    if (last) break;
  }
  return handler.finish();
}

// _____________________________________________________________________________
OsmData parseOsmFile(const std::string& path, const StationFilter& filter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open OSM file '" + path + "'");
  return parseOsm(in, filter);
}

// _____________________________________________________________________________
std::vector<StationIdentifier> expandIdentifiers(const OsmStationNode& node,
                                                 const StopArea* enclosing) {
  std::vector<std::string> labels;
  auto add = [&](const std::string& l) {
    if (l.empty()) return;
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) {
      labels.push_back(l);
    }
  };
  for (const auto& [attr, value] : node.labels) add(value);
  if (enclosing) {
    for (const auto& [attr, value] : enclosing->labels) add(value);
  }
  std::vector<StationIdentifier> ret;
  ret.reserve(labels.size());
  for (auto& l : labels) ret.emplace_back(std::move(l), node.pos);
  return ret;
}

}  // namespace stationmatch
