#ifndef STATIONMATCH_FEATURES_H_
#define STATIONMATCH_FEATURES_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stationmatch/classifier.h"
#include "stationmatch/geo.h"
#include "stationmatch/station.h"

namespace stationmatch {

// The k most frequent trigrams of a label corpus, most frequent first.
class TrigramVocabulary {
 public:
  TrigramVocabulary() = default;
  // Throws std::invalid_argument on duplicates.
  explicit TrigramVocabulary(std::vector<std::string> trigrams);

  // Ranks by total occurrence count over all labels, ties broken by byte
  // order. Requires k >= 1 and a non-empty corpus.
  static TrigramVocabulary build(const std::vector<std::string>& labels,
                                 std::size_t k);

  std::size_t size() const { return _trigrams.size(); }
  const std::vector<std::string>& trigrams() const { return _trigrams; }
  std::optional<std::size_t> indexOf(const std::string& trigram) const;

 private:
  std::vector<std::string> _trigrams;
  std::unordered_map<std::string, std::size_t> _index;
};

// |A3 u B3| - |A3 n B3| over trigram sets.
int trigramMismatch(std::string_view a, std::string_view b);

struct FeatureVector {
  double distance = 0;      // d_m
  int trigramMismatch = 0;  // d_3g
  std::vector<GridCoord> grid;
  // count in label b minus count in label a, per vocabulary trigram
  std::vector<int> trigramDiff;

  // d_m, d_3g, x0, y0, x1, y1, ..., trigram diffs in vocabulary order.
  std::vector<float> flatten() const;
};

class FeatureExtractor {
 public:
  FeatureExtractor(TrigramVocabulary vocab, GridSpec grid);

  // Side a is the "left" label. Callers put pairs in canonical order first.
  FeatureVector extract(const PairView& p) const;
  FeatureVector extract(const StationPair& p) const;

  std::size_t numFeatures() const;
  std::vector<std::string> columnNames() const;

  const TrigramVocabulary& vocabulary() const { return _vocab; }
  const GridSpec& grid() const { return _grid; }

 private:
  TrigramVocabulary _vocab;
  GridSpec _grid;
};

// Header line of column names (plus "class"), then one row per pair.
void writeFeatureMatrixTsv(std::ostream& out, const FeatureExtractor& fx,
                           const std::vector<StationPair>& pairs);

// Labels of the distinct identifiers referenced by the pairs, in first
// occurrence order. Used as the training corpus for vocabularies and TFIDF.
std::vector<std::string> corpusLabels(const std::vector<StationPair>& pairs);

}  // namespace stationmatch

#endif  // STATIONMATCH_FEATURES_H_
