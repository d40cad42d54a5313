#ifndef STATIONMATCH_TESTS_SUPPORT_ORACLES_H_
#define STATIONMATCH_TESTS_SUPPORT_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Deliberately naive reference implementations, written independently of
// the library in the most direct form of each definition. They work on code
// point strings; tokens are maximal runs of characters other than the
// separators below.
namespace stationmatch::oracle {

// Symbols random test strings are drawn from: three ASCII letters, one
// two-byte UTF-8 letter and two separators.
inline const std::u32string kAlphabet = U"abcä -";

bool isSeparator(char32_t c);
std::string encodeUtf8(const std::u32string& s);

std::u32string randomString(std::uint64_t& state, std::size_t maxLen,
                            const std::u32string& alphabet = kAlphabet);

// Memoized recursion over (i, j) suffixes.
std::size_t editDistance(const std::u32string& a, const std::u32string& b);
double edSimilarity(const std::u32string& a, const std::u32string& b);

// min over every prefix of b, each computed separately.
std::size_t prefixEditDistance(const std::u32string& a,
                               const std::u32string& b);
double pedSimilarity(const std::u32string& a, const std::u32string& b);

double jaro(const std::u32string& a, const std::u32string& b);
double jaroWinkler(const std::u32string& a, const std::u32string& b);

std::vector<std::u32string> tokens(const std::u32string& s);
double jaccard(const std::u32string& a, const std::u32string& b);

// Every non-empty subset by bitmask, every ordering of it by
// std::next_permutation. No fallback.
double bts(const std::u32string& a, const std::u32string& b);

// Cosine of tf*idf vectors with idf = ln(n / max(df, 1)).
double tfidf(const std::vector<std::u32string>& corpus,
             const std::u32string& a, const std::u32string& b);

}  // namespace stationmatch::oracle

#endif  // STATIONMATCH_TESTS_SUPPORT_ORACLES_H_
