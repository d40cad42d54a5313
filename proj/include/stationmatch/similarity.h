#ifndef STATIONMATCH_SIMILARITY_H_
#define STATIONMATCH_SIMILARITY_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stationmatch {

// All measures work on Unicode code points of raw (UTF-8) labels and return
// scores in [0, 1]. Two empty inputs score 1; empty vs. non-empty scores 0
// (ed_similarity follows its formula, which also gives 0).

// Levenshtein distance (insert, delete, substitute; unit costs).
std::size_t editDistance(std::u32string_view a, std::u32string_view b);
std::size_t editDistance(std::string_view a, std::string_view b);

// 1 - ed(a, b) / max(|a|, |b|).
double edSimilarity(std::string_view a, std::string_view b);
double edSimilarity(std::u32string_view a, std::u32string_view b);

// min over prefixes p of b of ed(a, p).
std::size_t prefixEditDistance(std::u32string_view a, std::u32string_view b);

// max(1 - ped(a, b) / |a|, 1 - ped(b, a) / |b|).
double pedSimilarity(std::string_view a, std::string_view b);

// Jaro similarity; match window floor(max(|a|, |b|) / 2) - 1.
double jaro(std::string_view a, std::string_view b);
double jaro(std::u32string_view a, std::u32string_view b);

// jaro + l * 0.1 * (1 - jaro), l = common prefix length capped at 4.
double jaroWinkler(std::string_view a, std::string_view b);

// |A & B| / |A | B| over token sets.
double jaccard(std::string_view a, std::string_view b);

// When best-token-subsequence scoring gives up and returns jaccard().
enum class BtsFallback {
  PermutationCount,  // |P(A)| > limit or |P(B)| > limit
  TokenCount,        // |A| > limit or |B| > limit
  Never,
};

struct BtsOptions {
  BtsFallback fallback = BtsFallback::PermutationCount;
  std::size_t limit = 6;
};

// Number of non-empty ordered token subsets of n tokens:
// sum_{k=1..n} n! / (n - k)!. Saturates at SIZE_MAX.
std::size_t orderedSubsetCount(std::size_t n);

// All space-joined permutations of all non-empty subsets of the tokens
// (tokens are addressed by position, so repeated tokens yield repeated
// candidates).
std::vector<std::string> tokenPermutations(
    const std::vector<std::string>& tokens);

// Best token subsequence similarity: the best ed similarity of any candidate
// from tokenPermutations(tokenize(a)) against the raw b, and vice versa.
double bts(std::string_view a, std::string_view b, const BtsOptions& opts = {});

// Document frequencies over a label corpus (each label is one document).
class TfidfModel {
 public:
  TfidfModel() = default;

  // Throws std::invalid_argument for an empty corpus.
  static TfidfModel train(const std::vector<std::string>& labels);

  std::size_t numDocs() const { return _numDocs; }
  // 0 for unseen tokens.
  std::size_t docFreq(const std::string& token) const;
  // ln(n / df), with df = 1 for unseen tokens.
  double idf(const std::string& token) const;

  // Cosine of the tf * idf vectors of both labels' tokens.
  double similarity(std::string_view a, std::string_view b) const;

  const std::unordered_map<std::string, std::size_t>& docFreqs() const {
    return _docFreq;
  }

 private:
  std::size_t _numDocs = 0;
  std::unordered_map<std::string, std::size_t> _docFreq;
};

}  // namespace stationmatch

#endif  // STATIONMATCH_SIMILARITY_H_
