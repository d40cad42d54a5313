#ifndef STATIONMATCH_FOREST_H_
#define STATIONMATCH_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stationmatch/features.h"
#include "stationmatch/geo.h"
#include "stationmatch/random.h"
#include "stationmatch/station.h"

namespace stationmatch {

// Dense, column-major float matrix. Features are stored as float32; tree
// thresholds are compared against the float value widened to double.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols);
  static FeatureMatrix fromRows(const std::vector<std::vector<float>>& rows);

  std::size_t rows() const { return _rows; }
  std::size_t cols() const { return _cols; }

  float at(std::size_t r, std::size_t c) const { return _data[c * _rows + r]; }
  float& at(std::size_t r, std::size_t c) { return _data[c * _rows + r]; }
  std::span<const float> column(std::size_t c) const {
    return {_data.data() + c * _rows, _rows};
  }
  void setRow(std::size_t r, std::span<const float> values);
  std::vector<float> row(std::size_t r) const;

 private:
  std::size_t _rows = 0;
  std::size_t _cols = 0;
  std::vector<float> _data;
};

struct ForestParams {
  int numTrees = 100;
  // Features examined per split; default floor(sqrt(#features)), min 1.
  std::optional<int> maxFeatures;
  int minSamplesSplit = 2;
  std::optional<int> maxDepth;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  void validate() const;
  int resolveMaxFeatures(std::size_t numFeatures) const;
};

// Binary CART tree. Internal nodes send value <= threshold left.
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 for leaves
    double threshold = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t count[2] = {0, 0};  // per class: NotSimilar, Similar

    bool isLeaf() const { return feature < 0; }
  };

  DecisionTree() = default;
  explicit DecisionTree(std::vector<Node> nodes);

  // Fraction of Similar training samples in the reached leaf.
  double predictProba(std::span<const float> row) const;

  const std::vector<Node>& nodes() const { return _nodes; }
  std::size_t depth() const;

 private:
  std::vector<Node> _nodes;
};

// Greedy Gini CART on the given sample rows (duplicates act as weights).
// At every node features are visited in random order; constant features are
// skipped without counting, until maxFeatures non-constant features were
// evaluated. Split thresholds are midpoints of adjacent distinct values.
// labels: 1 = Similar, 0 = NotSimilar.
DecisionTree trainTree(const FeatureMatrix& x,
                       std::span<const std::uint8_t> labels,
                       std::span<const std::uint32_t> sampleRows,
                       const ForestParams& params, Rng& rng);
DecisionTree trainTree(const FeatureMatrix& x,
                       std::span<const std::uint8_t> labels,
                       const ForestParams& params, Rng& rng);

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(ForestParams params, std::vector<DecisionTree> trees);

  // Mean of per-tree leaf fractions.
  double predictProba(std::span<const float> row) const;
  // Similar iff probability > 0.5.
  PairClass predict(std::span<const float> row) const;

  const ForestParams& params() const { return _params; }
  const std::vector<DecisionTree>& trees() const { return _trees; }

 private:
  ForestParams _params;
  std::vector<DecisionTree> _trees;
};

// Tree t is trained with Rng(seed).substream(t); with bootstrap on it first
// draws rows() samples with replacement from that stream. Results do not
// depend on the thread count.
RandomForest trainForest(const FeatureMatrix& x,
                         std::span<const std::uint8_t> labels,
                         const ForestParams& params, unsigned threads = 1);

struct FeatureSchema {
  std::vector<std::string> columns;
  TrigramVocabulary vocabulary;
  GridSpec grid;
};

struct Prediction {
  PairClass cls = PairClass::NotSimilar;
  double probability = 0;
};

// Forest plus everything needed to build its input vectors. Stored as JSON:
//   {"format": "stationmatch-random-forest", "version": 1,
//    "params": {...},
//    "schema": {"columns": [...], "vocabulary": [...],
//               "grid": {"base_resolution": r, "num_grids": n}},
//    "trees": [{"feature": [...], "threshold": [...], "left": [...],
//               "right": [...], "count0": [...], "count1": [...]}, ...]}
// Node arrays are indexed by node id, the root is node 0 and leaves have
// feature -1.
class RandomForestModel {
 public:
  static constexpr int kFormatVersion = 1;
  static constexpr const char* kFormatName = "stationmatch-random-forest";

  RandomForestModel(FeatureSchema schema, RandomForest forest);

  // Throws std::invalid_argument if fv does not match the schema.
  Prediction predict(const FeatureVector& fv) const;
  Prediction predictRow(std::span<const float> row) const;

  // Canonically orders the pair before extracting features.
  Prediction classify(const StationIdentifier& a,
                      const StationIdentifier& b) const;

  FeatureExtractor extractor() const;
  const FeatureSchema& schema() const { return _schema; }
  const RandomForest& forest() const { return _forest; }

  void save(std::ostream& out) const;
  void saveFile(const std::string& path) const;
  // Throws VersionError or FormatError.
  static RandomForestModel load(std::istream& in);
  static RandomForestModel loadFile(const std::string& path);

 private:
  FeatureSchema _schema;
  RandomForest _forest;
};

// Extracts features for every pair (in parallel, deterministic order).
FeatureMatrix buildFeatureMatrix(const FeatureExtractor& fx,
                                 const std::vector<StationPair>& pairs,
                                 unsigned threads = 1);
std::vector<std::uint8_t> pairLabels(const std::vector<StationPair>& pairs);

// Builds the vocabulary from the pairs' corpus, extracts features and trains.
RandomForestModel trainPairModel(const std::vector<StationPair>& pairs,
                                 std::size_t topK, const GridSpec& grid,
                                 const ForestParams& params,
                                 unsigned threads = 1);

}  // namespace stationmatch

#endif  // STATIONMATCH_FOREST_H_
