#include "stationmatch/text.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace stationmatch {

// _____________________________________________________________________________
std::u32string toCodepoints(std::string_view utf8) {
  std::u32string ret;
  ret.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  int32_t len = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    ret.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return ret;
}

// _____________________________________________________________________________
std::string toUtf8(std::u32string_view cps) {
  std::string ret;
  ret.reserve(cps.size());
  for (char32_t c : cps) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool err = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), err);
    if (err) {
      ret += "\xEF\xBF\xBD";
    } else {
      ret.append(reinterpret_cast<const char*>(buf), n);
    }
  }
  return ret;
}

// _____________________________________________________________________________
std::string toLower(std::string_view utf8) {
  auto cps = toCodepoints(utf8);
  for (auto& c : cps) c = static_cast<char32_t>(u_tolower(c));
  return toUtf8(cps);
}

// _____________________________________________________________________________
bool isWordChar(char32_t c) {
  return c == U'_' || u_isalnum(static_cast<UChar32>(c));
}

// _____________________________________________________________________________
std::vector<std::string> tokenize(std::string_view label) {
  std::vector<std::string> ret;
  std::u32string cur;
  for (char32_t c : toCodepoints(label)) {
    if (isWordChar(c)) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      ret.push_back(toUtf8(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) ret.push_back(toUtf8(cur));
  return ret;
}

// _____________________________________________________________________________
TrigramMultiset trigrams(std::string_view label) {
  std::u32string padded = U" " + toCodepoints(label) + U" ";
  TrigramMultiset ret;
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    ret[toUtf8(std::u32string_view(padded).substr(i, 3))]++;
  }
  return ret;
}

// _____________________________________________________________________________
std::set<std::string> trigramSet(std::string_view label) {
  std::set<std::string> ret;
  for (const auto& [tri, count] : trigrams(label)) ret.insert(tri);
  return ret;
}

}  // namespace stationmatch
