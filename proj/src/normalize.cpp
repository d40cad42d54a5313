#include "stationmatch/normalize.h"

#include <fstream>
#include <istream>

#include "stationmatch/error.h"
#include "stationmatch/text.h"

namespace stationmatch {

namespace {

// \1 -> $1, literal $ -> $$
std::string toEcmaFormat(const std::string& repl) {
  std::string ret;
  for (std::size_t i = 0; i < repl.size(); ++i) {
    char c = repl[i];
    if (c == '\\' && i + 1 < repl.size() && repl[i + 1] >= '0' &&
        repl[i + 1] <= '9') {
      ret += '$';
      ret += repl[++i];
    } else if (c == '\\' && i + 1 < repl.size() && repl[i + 1] == '\\') {
      ret += '\\';
      ++i;
    } else if (c == '$') {
      ret += "$$";
    } else {
      ret += c;
    }
  }
  return ret;
}

std::string collapseWhitespace(std::string_view s) {
  std::string ret;
  bool pendingSpace = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v') {
      pendingSpace = !ret.empty();
    } else {
      if (pendingSpace) ret += ' ';
      pendingSpace = false;
      ret += c;
    }
  }
  return ret;
}

}  // namespace

// _____________________________________________________________________________
Normalizer::Normalizer(std::vector<NormalizationRule> rules)
    : _rules(std::move(rules)) {
  _compiled.reserve(_rules.size());
  for (const auto& r : _rules) {
    try {
      _compiled.emplace_back(std::regex(r.pattern, std::regex::ECMAScript),
                             toEcmaFormat(r.replacement));
    } catch (const std::regex_error& e) {
      throw ConfigError("invalid normalization pattern '" + r.pattern +
                        "': " + e.what());
    }
  }
}

// _____________________________________________________________________________
Normalizer Normalizer::fromStream(std::istream& in) {
  std::vector<NormalizationRule> rules;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      rules.push_back({line, ""});
    } else {
      rules.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
  }
  return Normalizer(std::move(rules));
}

// _____________________________________________________________________________
Normalizer Normalizer::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rules file '" + path + "'");
  return fromStream(in);
}

// _____________________________________________________________________________
std::string Normalizer::operator()(std::string_view label) const {
  std::string s = toLower(label);
  for (const auto& [re, fmt] : _compiled) s = std::regex_replace(s, re, fmt);
  return collapseWhitespace(s);
}

}  // namespace stationmatch
