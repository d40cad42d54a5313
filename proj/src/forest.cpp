#include "stationmatch/forest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "stationmatch/error.h"
#include "stationmatch/parallel.h"

namespace stationmatch {

using nlohmann::json;

// _____________________________________________________________________________
FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols)
    : _rows(rows), _cols(cols), _data(rows * cols, 0.0f) {}

// _____________________________________________________________________________
FeatureMatrix FeatureMatrix::fromRows(
    const std::vector<std::vector<float>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  FeatureMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.setRow(r, rows[r]);
  return m;
}

// _____________________________________________________________________________
void FeatureMatrix::setRow(std::size_t r, std::span<const float> values) {
  if (values.size() != _cols) {
    throw std::invalid_argument("row has " + std::to_string(values.size()) +
                                " values, matrix has " +
                                std::to_string(_cols) + " columns");
  }
  for (std::size_t c = 0; c < _cols; ++c) at(r, c) = values[c];
}

// _____________________________________________________________________________
std::vector<float> FeatureMatrix::row(std::size_t r) const {
  std::vector<float> ret(_cols);
  for (std::size_t c = 0; c < _cols; ++c) ret[c] = at(r, c);
  return ret;
}

// _____________________________________________________________________________
void ForestParams::validate() const {
  if (numTrees < 1) throw std::invalid_argument("n_trees must be >= 1");
  if (minSamplesSplit < 2) {
    throw std::invalid_argument("min_samples_split must be >= 2");
  }
  if (maxFeatures && *maxFeatures < 1) {
    throw std::invalid_argument("max_features must be >= 1");
  }
  if (maxDepth && *maxDepth < 0) {
    throw std::invalid_argument("max_depth must be >= 0");
  }
}

// _____________________________________________________________________________
int ForestParams::resolveMaxFeatures(std::size_t numFeatures) const {
  int n = static_cast<int>(numFeatures);
  if (maxFeatures) return std::min(*maxFeatures, n);
  int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  return std::max(1, k);
}

// _____________________________________________________________________________
DecisionTree::DecisionTree(std::vector<Node> nodes)
    : _nodes(std::move(nodes)) {}

// _____________________________________________________________________________
double DecisionTree::predictProba(std::span<const float> row) const {
  if (_nodes.empty()) throw std::logic_error("empty decision tree");
  std::size_t cur = 0;
  while (!_nodes[cur].isLeaf()) {
    const auto& n = _nodes[cur];
    cur = static_cast<double>(row[n.feature]) <= n.threshold ? n.left : n.right;
  }
  const auto& leaf = _nodes[cur];
  return static_cast<double>(leaf.count[1]) / (leaf.count[0] + leaf.count[1]);
}

// _____________________________________________________________________________
std::size_t DecisionTree::depth() const {
  if (_nodes.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack = {{0, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!_nodes[id].isLeaf()) {
      stack.emplace_back(_nodes[id].left, d + 1);
      stack.emplace_back(_nodes[id].right, d + 1);
    }
  }
  return best;
}

namespace {

// Columns whose values are all small integers can be split with a counting
// pass instead of a sort.
std::vector<char> integralColumns(const FeatureMatrix& x) {
  std::vector<char> ret(x.cols(), 1);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (float v : x.column(c)) {
      if (v != std::floor(v) || std::fabs(v) > (1 << 24)) {
        ret[c] = 0;
        break;
      }
    }
  }
  return ret;
}

constexpr int kMaxBuckets = 4096;

struct Split {
  int feature = -1;
  double threshold = 0;
  double score = -std::numeric_limits<double>::infinity();
};

// Proxy for the negated weighted Gini impurity of a split; larger is
// better: sum over children of (c0^2 + c1^2) / n.
inline double splitScore(double l0, double l1, double r0, double r1) {
  return (l0 * l0 + l1 * l1) / (l0 + l1) + (r0 * r0 + r1 * r1) / (r0 + r1);
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::span<const std::uint8_t> y,
              const std::vector<char>& integral, const ForestParams& params,
              Rng& rng)
      : _x(x),
        _y(y),
        _integral(integral),
        _params(params),
        _rng(rng),
        _maxFeatures(params.resolveMaxFeatures(x.cols())),
        _features(x.cols()) {
    std::iota(_features.begin(), _features.end(), 0);
  }

  DecisionTree build(std::vector<std::uint32_t> samples) {
    struct Task {
      std::size_t begin, end, depth, node;
    };
    std::vector<DecisionTree::Node> nodes(1);
    std::vector<Task> stack = {{0, samples.size(), 0, 0}};

    while (!stack.empty()) {
      Task t = stack.back();
      stack.pop_back();
      std::span<std::uint32_t> s(samples.data() + t.begin, t.end - t.begin);

      std::uint32_t c1 = 0;
      for (auto r : s) c1 += _y[r];
      std::uint32_t c0 = static_cast<std::uint32_t>(s.size()) - c1;
      nodes[t.node].count[0] = c0;
      nodes[t.node].count[1] = c1;

      bool stop =
          c0 == 0 || c1 == 0 ||
          s.size() < static_cast<std::size_t>(_params.minSamplesSplit) ||
          (_params.maxDepth &&
           t.depth >= static_cast<std::size_t>(*_params.maxDepth));
      if (stop) continue;

      Split best = findSplit(s, c0, c1);
      if (best.feature < 0) continue;

      auto col = _x.column(best.feature);
      auto mid = std::partition(s.begin(), s.end(), [&](std::uint32_t r) {
        return static_cast<double>(col[r]) <= best.threshold;
      });
      std::size_t nLeft = mid - s.begin();

      auto left = static_cast<std::int32_t>(nodes.size());
      nodes.emplace_back();
      auto right = static_cast<std::int32_t>(nodes.size());
      nodes.emplace_back();
      auto& n = nodes[t.node];
      n.feature = best.feature;
      n.threshold = best.threshold;
      n.left = left;
      n.right = right;

      stack.push_back({t.begin + nLeft, t.end, t.depth + 1,
                       static_cast<std::size_t>(right)});
      stack.push_back({t.begin, t.begin + nLeft, t.depth + 1,
                       static_cast<std::size_t>(left)});
    }
    return DecisionTree(std::move(nodes));
  }

 private:
  Split findSplit(std::span<const std::uint32_t> s, std::uint32_t c0,
                  std::uint32_t c1) {
    Split best;
    int evaluated = 0;
    const std::size_t d = _features.size();
    for (std::size_t i = 0; i < d && evaluated < _maxFeatures; ++i) {
      std::size_t j = i + _rng.below(d - i);
      std::swap(_features[i], _features[j]);
      int f = _features[i];
      if (evalFeature(f, s, c0, c1, best)) ++evaluated;
    }
    return best;
  }

  // Returns false if the feature is constant on s.
  bool evalFeature(int f, std::span<const std::uint32_t> s, std::uint32_t c0,
                   std::uint32_t c1, Split& best) {
    auto col = _x.column(f);
    float lo = col[s[0]], hi = lo;
    for (auto r : s) {
      lo = std::min(lo, col[r]);
      hi = std::max(hi, col[r]);
    }
    if (lo == hi) return false;

    if (_integral[f] && hi - lo < kMaxBuckets) {
      evalBuckets(f, col, s, lo, hi, c0, c1, best);
    } else {
      evalSorted(f, col, s, c0, c1, best);
    }
    return true;
  }

  void evalBuckets(int f, std::span<const float> col,
                   std::span<const std::uint32_t> s, float lo, float hi,
                   std::uint32_t c0, std::uint32_t c1, Split& best) {
    std::size_t size = static_cast<std::size_t>(hi - lo) + 1;
    _bucket0.assign(size, 0);
    _bucket1.assign(size, 0);
    for (auto r : s) {
      auto b = static_cast<std::size_t>(col[r] - lo);
      if (_y[r]) {
        ++_bucket1[b];
      } else {
        ++_bucket0[b];
      }
    }
    double l0 = 0, l1 = 0;
    std::size_t prev = size;
    for (std::size_t b = 0; b < size; ++b) {
      if (_bucket0[b] + _bucket1[b] == 0) continue;
      if (prev != size) {
        double score = splitScore(l0, l1, c0 - l0, c1 - l1);
        if (score > best.score) {
          best.score = score;
          best.feature = f;
          best.threshold = (static_cast<double>(lo) + prev +
                            static_cast<double>(lo) + b) / 2.0;
        }
      }
      l0 += _bucket0[b];
      l1 += _bucket1[b];
      prev = b;
    }
  }

  void evalSorted(int f, std::span<const float> col,
                  std::span<const std::uint32_t> s, std::uint32_t c0,
                  std::uint32_t c1, Split& best) {
    _sorted.clear();
    for (auto r : s) _sorted.emplace_back(col[r], _y[r]);
    std::sort(_sorted.begin(), _sorted.end());
    double l0 = 0, l1 = 0;
    for (std::size_t i = 0; i + 1 < _sorted.size(); ++i) {
      if (_sorted[i].second) {
        ++l1;
      } else {
        ++l0;
      }
      if (_sorted[i].first == _sorted[i + 1].first) continue;
      double score = splitScore(l0, l1, c0 - l0, c1 - l1);
      if (score > best.score) {
        best.score = score;
        best.feature = f;
        best.threshold = (static_cast<double>(_sorted[i].first) +
                          static_cast<double>(_sorted[i + 1].first)) / 2.0;
      }
    }
  }

  const FeatureMatrix& _x;
  std::span<const std::uint8_t> _y;
  const std::vector<char>& _integral;
  const ForestParams& _params;
  Rng& _rng;
  int _maxFeatures;
  std::vector<int> _features;
  std::vector<std::uint32_t> _bucket0, _bucket1;
  std::vector<std::pair<float, std::uint8_t>> _sorted;
};

void checkTrainingInput(const FeatureMatrix& x,
                        std::span<const std::uint8_t> labels,
                        const ForestParams& params) {
  params.validate();
  if (x.rows() == 0) throw std::invalid_argument("no training rows");
  if (x.cols() == 0) throw std::invalid_argument("no feature columns");
  if (labels.size() != x.rows()) {
    throw std::invalid_argument("got " + std::to_string(labels.size()) +
                                " labels for " + std::to_string(x.rows()) +
                                " rows");
  }
  for (auto l : labels) {
    if (l > 1) throw std::invalid_argument("labels must be 0 or 1");
  }
}

DecisionTree trainTreeImpl(const FeatureMatrix& x,
                           std::span<const std::uint8_t> labels,
                           std::span<const std::uint32_t> sampleRows,
                           const std::vector<char>& integral,
                           const ForestParams& params, Rng& rng) {
  if (sampleRows.empty()) throw std::invalid_argument("no training samples");
  for (auto r : sampleRows) {
    if (r >= x.rows()) throw std::invalid_argument("sample row out of range");
  }
  TreeBuilder builder(x, labels, integral, params, rng);
  return builder.build({sampleRows.begin(), sampleRows.end()});
}

}  // namespace

// _____________________________________________________________________________
DecisionTree trainTree(const FeatureMatrix& x,
                       std::span<const std::uint8_t> labels,
                       std::span<const std::uint32_t> sampleRows,
                       const ForestParams& params, Rng& rng) {
  checkTrainingInput(x, labels, params);
  return trainTreeImpl(x, labels, sampleRows, integralColumns(x), params, rng);
}

// _____________________________________________________________________________
DecisionTree trainTree(const FeatureMatrix& x,
                       std::span<const std::uint8_t> labels,
                       const ForestParams& params, Rng& rng) {
  std::vector<std::uint32_t> all(x.rows());
  std::iota(all.begin(), all.end(), 0);
  return trainTree(x, labels, all, params, rng);
}

// _____________________________________________________________________________
RandomForest::RandomForest(ForestParams params, std::vector<DecisionTree> trees)
    : _params(std::move(params)), _trees(std::move(trees)) {}

// _____________________________________________________________________________
double RandomForest::predictProba(std::span<const float> row) const {
  if (_trees.empty()) throw std::logic_error("empty forest");
  double sum = 0;
  for (const auto& t : _trees) sum += t.predictProba(row);
  return sum / _trees.size();
}

// _____________________________________________________________________________
PairClass RandomForest::predict(std::span<const float> row) const {
  return pairClassFromBool(predictProba(row) > 0.5);
}

// _____________________________________________________________________________
RandomForest trainForest(const FeatureMatrix& x,
                         std::span<const std::uint8_t> labels,
                         const ForestParams& params, unsigned threads) {
  checkTrainingInput(x, labels, params);
  auto integral = integralColumns(x);
  Rng base(params.seed);
  std::vector<DecisionTree> trees(params.numTrees);

  parallelFor(trees.size(), threads, [&](std::size_t t) {
    Rng rng = base.substream(t);
    std::vector<std::uint32_t> samples(x.rows());
    if (params.bootstrap) {
      for (auto& s : samples)
        s = static_cast<std::uint32_t>(rng.below(x.rows()));
    } else {
      std::iota(samples.begin(), samples.end(), 0);
    }
    trees[t] = trainTreeImpl(x, labels, samples, integral, params, rng);
  });
  return RandomForest(params, std::move(trees));
}

// _____________________________________________________________________________
RandomForestModel::RandomForestModel(FeatureSchema schema, RandomForest forest)
    : _schema(std::move(schema)), _forest(std::move(forest)) {
  auto expected = extractor().columnNames();
  if (_schema.columns != expected) {
    throw FormatError("feature schema columns do not match vocabulary/grid");
  }
}

// _____________________________________________________________________________
FeatureExtractor RandomForestModel::extractor() const {
  return FeatureExtractor(_schema.vocabulary, _schema.grid);
}

// _____________________________________________________________________________
Prediction RandomForestModel::predictRow(std::span<const float> row) const {
  if (row.size() != _schema.columns.size()) {
    throw std::invalid_argument("feature vector has " +
                                std::to_string(row.size()) +
                                " values, model expects " +
                                std::to_string(_schema.columns.size()));
  }
  double p = _forest.predictProba(row);
  return {pairClassFromBool(p > 0.5), p};
}

// _____________________________________________________________________________
Prediction RandomForestModel::predict(const FeatureVector& fv) const {
  if (fv.grid.size() != static_cast<std::size_t>(_schema.grid.numGrids) ||
      fv.trigramDiff.size() != _schema.vocabulary.size()) {
    throw std::invalid_argument("feature vector does not match model schema");
  }
  return predictRow(fv.flatten());
}

// _____________________________________________________________________________
Prediction RandomForestModel::classify(const StationIdentifier& a,
                                       const StationIdentifier& b) const {
  auto p = canonicalOrder(StationPair{a, b});
  return predict(extractor().extract(p));
}

namespace {

json paramsToJson(const ForestParams& p) {
  json j;
  j["n_trees"] = p.numTrees;
  j["max_features"] = p.maxFeatures ? json(*p.maxFeatures) : json(nullptr);
  j["min_samples_split"] = p.minSamplesSplit;
  j["max_depth"] = p.maxDepth ? json(*p.maxDepth) : json(nullptr);
  j["bootstrap"] = p.bootstrap;
  j["seed"] = p.seed;
  return j;
}

ForestParams paramsFromJson(const json& j) {
  ForestParams p;
  p.numTrees = j.at("n_trees").get<int>();
  if (!j.at("max_features").is_null()) {
    p.maxFeatures = j.at("max_features").get<int>();
  }
  p.minSamplesSplit = j.at("min_samples_split").get<int>();
  if (!j.at("max_depth").is_null()) p.maxDepth = j.at("max_depth").get<int>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

json treeToJson(const DecisionTree& t) {
  std::vector<std::int32_t> feature, left, right;
  std::vector<double> threshold;
  std::vector<std::uint32_t> count0, count1;
  for (const auto& n : t.nodes()) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    count0.push_back(n.count[0]);
    count1.push_back(n.count[1]);
  }
  return json{{"feature", feature}, {"threshold", threshold},
              {"left", left},       {"right", right},
              {"count0", count0},   {"count1", count1}};
}

DecisionTree treeFromJson(const json& j, std::size_t numFeatures) {
  auto feature = j.at("feature").get<std::vector<std::int32_t>>();
  auto threshold = j.at("threshold").get<std::vector<double>>();
  auto left = j.at("left").get<std::vector<std::int32_t>>();
  auto right = j.at("right").get<std::vector<std::int32_t>>();
  auto count0 = j.at("count0").get<std::vector<std::uint32_t>>();
  auto count1 = j.at("count1").get<std::vector<std::uint32_t>>();
  std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n ||
      right.size() != n || count0.size() != n || count1.size() != n) {
    throw FormatError("inconsistent tree node arrays");
  }
  std::vector<DecisionTree::Node> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = nodes[i];
    node.feature = feature[i];
    node.threshold = threshold[i];
    node.left = left[i];
    node.right = right[i];
    node.count[0] = count0[i];
    node.count[1] = count1[i];
    if (node.isLeaf()) {
      if (node.count[0] + node.count[1] == 0) {
        throw FormatError("leaf without samples");
      }
      continue;
    }
    // children always come after their parent, which also rules out cycles
    auto valid = [&](std::int32_t c) {
      return c > static_cast<std::int32_t>(i) &&
             c < static_cast<std::int32_t>(n);
    };
    if (static_cast<std::size_t>(node.feature) >= numFeatures ||
        !valid(node.left) || !valid(node.right)) {
      throw FormatError("invalid tree node " + std::to_string(i));
    }
  }
  return DecisionTree(std::move(nodes));
}

}  // namespace

// _____________________________________________________________________________
void RandomForestModel::save(std::ostream& out) const {
  json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["params"] = paramsToJson(_forest.params());
  j["schema"] = {{"columns", _schema.columns},
                 {"vocabulary", _schema.vocabulary.trigrams()},
                 {"grid",
                  {{"base_resolution", _schema.grid.baseResolution},
                   {"num_grids", _schema.grid.numGrids}}}};
  json trees = json::array();
  for (const auto& t : _forest.trees()) trees.push_back(treeToJson(t));
  j["trees"] = std::move(trees);
  out << j.dump() << '\n';
}

// _____________________________________________________________________________
void RandomForestModel::saveFile(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  save(out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

// _____________________________________________________________________________
RandomForestModel RandomForestModel::load(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormatName) {
      throw FormatError("not a stationmatch random forest model");
    }
    int version = j.at("version").get<int>();
    if (version != kFormatVersion) {
      throw VersionError("unsupported model version " +
                         std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")");
    }
    auto params = paramsFromJson(j.at("params"));
    params.validate();

    const auto& s = j.at("schema");
    FeatureSchema schema;
    schema.columns = s.at("columns").get<std::vector<std::string>>();
    schema.vocabulary =
        TrigramVocabulary(s.at("vocabulary").get<std::vector<std::string>>());
    schema.grid.baseResolution = s.at("grid").at("base_resolution").get<int>();
    schema.grid.numGrids = s.at("grid").at("num_grids").get<int>();
    schema.grid.validate();

    std::vector<DecisionTree> trees;
    for (const auto& t : j.at("trees")) {
      trees.push_back(treeFromJson(t, schema.columns.size()));
    }
    if (trees.size() != static_cast<std::size_t>(params.numTrees)) {
      throw FormatError("model has " + std::to_string(trees.size()) +
                        " trees, params say " +
                        std::to_string(params.numTrees));
    }
    return RandomForestModel(std::move(schema),
                             RandomForest(params, std::move(trees)));
  } catch (const json::exception& e) {
    throw FormatError(std::string("corrupt model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("corrupt model file: ") + e.what());
  }
}

// _____________________________________________________________________________
RandomForestModel RandomForestModel::loadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  return load(in);
}

// _____________________________________________________________________________
FeatureMatrix buildFeatureMatrix(const FeatureExtractor& fx,
                                 const std::vector<StationPair>& pairs,
                                 unsigned threads) {
  FeatureMatrix m(pairs.size(), fx.numFeatures());
  parallelFor(pairs.size(), threads, [&](std::size_t i) {
    m.setRow(i, fx.extract(pairs[i]).flatten());
  });
  return m;
}

// _____________________________________________________________________________
std::vector<std::uint8_t> pairLabels(const std::vector<StationPair>& pairs) {
  std::vector<std::uint8_t> ret;
  ret.reserve(pairs.size());
  for (const auto& p : pairs) ret.push_back(toInt(p.cls));
  return ret;
}

// _____________________________________________________________________________
RandomForestModel trainPairModel(const std::vector<StationPair>& pairs,
                                 std::size_t topK, const GridSpec& grid,
                                 const ForestParams& params, unsigned threads) {
  if (pairs.empty()) throw std::invalid_argument("no training pairs");
  FeatureExtractor fx(TrigramVocabulary::build(corpusLabels(pairs), topK),
                      grid);
  auto x = buildFeatureMatrix(fx, pairs, threads);
  auto forest = trainForest(x, pairLabels(pairs), params, threads);
  return RandomForestModel({fx.columnNames(), fx.vocabulary(), grid},
                           std::move(forest));
}

}  // namespace stationmatch
