#ifndef STATIONMATCH_TEXT_H_
#define STATIONMATCH_TEXT_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace stationmatch {

// UTF-8 <-> code points. Invalid sequences decode to U+FFFD.
std::u32string toCodepoints(std::string_view utf8);
std::string toUtf8(std::u32string_view cps);

// Simple (per code point) Unicode lowercase mapping.
std::string toLower(std::string_view utf8);

// Letters, digits and underscore.
bool isWordChar(char32_t c);

// Maximal runs of word characters, in order.
std::vector<std::string> tokenize(std::string_view label);

// Trigram -> occurrence count over the label padded with one space on each
// side. Case is preserved; windows are taken over code points.
using TrigramMultiset = std::map<std::string, int>;

TrigramMultiset trigrams(std::string_view label);
std::set<std::string> trigramSet(std::string_view label);

}  // namespace stationmatch

#endif  // STATIONMATCH_TEXT_H_
