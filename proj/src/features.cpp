#include "stationmatch/features.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "stationmatch/text.h"

namespace stationmatch {

// _____________________________________________________________________________
TrigramVocabulary::TrigramVocabulary(std::vector<std::string> trigrams)
    : _trigrams(std::move(trigrams)) {
  for (std::size_t i = 0; i < _trigrams.size(); ++i) {
    if (!_index.emplace(_trigrams[i], i).second) {
      throw std::invalid_argument("duplicate vocabulary trigram '" +
                                  _trigrams[i] + "'");
    }
  }
}

// _____________________________________________________________________________
TrigramVocabulary TrigramVocabulary::build(
    const std::vector<std::string>& labels, std::size_t k) {
  if (k < 1) throw std::invalid_argument("vocabulary size must be >= 1");
  if (labels.empty()) throw std::invalid_argument("trigram corpus is empty");

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& label : labels) {
    for (const auto& [tri, n] : stationmatch::trigrams(label)) {
      counts[tri] += n;
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
  auto cmp = [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  };
  if (ranked.size() > k) {
    std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end(), cmp);
    ranked.resize(k);
  } else {
    std::sort(ranked.begin(), ranked.end(), cmp);
  }

  std::vector<std::string> top;
  top.reserve(ranked.size());
  for (auto& [tri, n] : ranked) top.push_back(std::move(tri));
  return TrigramVocabulary(std::move(top));
}

// _____________________________________________________________________________
std::optional<std::size_t> TrigramVocabulary::indexOf(
    const std::string& trigram) const {
  auto it = _index.find(trigram);
  if (it == _index.end()) return std::nullopt;
  return it->second;
}

// _____________________________________________________________________________
int trigramMismatch(std::string_view a, std::string_view b) {
  auto sa = trigramSet(a);
  auto sb = trigramSet(b);
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  return static_cast<int>(sa.size() + sb.size() - 2 * common);
}

// _____________________________________________________________________________
std::vector<float> FeatureVector::flatten() const {
  std::vector<float> ret;
  ret.reserve(2 + 2 * grid.size() + trigramDiff.size());
  ret.push_back(static_cast<float>(distance));
  ret.push_back(static_cast<float>(trigramMismatch));
  for (const auto& g : grid) {
    ret.push_back(static_cast<float>(g.x));
    ret.push_back(static_cast<float>(g.y));
  }
  for (int d : trigramDiff) ret.push_back(static_cast<float>(d));
  return ret;
}

// _____________________________________________________________________________
FeatureExtractor::FeatureExtractor(TrigramVocabulary vocab, GridSpec grid)
    : _vocab(std::move(vocab)), _grid(grid) {
  _grid.validate();
}

// _____________________________________________________________________________
FeatureVector FeatureExtractor::extract(const PairView& p) const {
  FeatureVector fv;
  fv.distance = geoDistance(p.posA, p.posB);
  fv.grid = gridCells(centroid(p.posA, p.posB), _grid);

  auto ta = trigrams(p.labelA);
  auto tb = trigrams(p.labelB);
  std::size_t common = 0;
  for (const auto& [tri, n] : ta) common += tb.count(tri);
  fv.trigramMismatch = static_cast<int>(ta.size() + tb.size() - 2 * common);

  fv.trigramDiff.assign(_vocab.size(), 0);
  for (const auto& [tri, n] : ta) {
    if (auto idx = _vocab.indexOf(tri)) fv.trigramDiff[*idx] -= n;
  }
  for (const auto& [tri, n] : tb) {
    if (auto idx = _vocab.indexOf(tri)) fv.trigramDiff[*idx] += n;
  }
  return fv;
}

// _____________________________________________________________________________
FeatureVector FeatureExtractor::extract(const StationPair& p) const {
  return extract(view(p.a, p.b));
}

// _____________________________________________________________________________
std::size_t FeatureExtractor::numFeatures() const {
  return 2 + 2 * static_cast<std::size_t>(_grid.numGrids) + _vocab.size();
}

// _____________________________________________________________________________
std::vector<std::string> FeatureExtractor::columnNames() const {
  std::vector<std::string> ret = {"d_m", "d_3g"};
  for (int i = 0; i < _grid.numGrids; ++i) {
    ret.push_back("x" + std::to_string(i));
    ret.push_back("y" + std::to_string(i));
  }
  for (const auto& t : _vocab.trigrams()) ret.push_back("tri:" + t);
  return ret;
}

// _____________________________________________________________________________
void writeFeatureMatrixTsv(std::ostream& out, const FeatureExtractor& fx,
                           const std::vector<StationPair>& pairs) {
  for (const auto& name : fx.columnNames()) out << name << '\t';
  out << "class\n";
  for (const auto& p : pairs) {
    auto fv = fx.extract(p);
    out << formatDouble(fv.distance) << '\t' << fv.trigramMismatch;
    for (const auto& g : fv.grid) out << '\t' << g.x << '\t' << g.y;
    for (int d : fv.trigramDiff) out << '\t' << d;
    out << '\t' << toInt(p.cls) << '\n';
  }
}

// _____________________________________________________________________________
std::vector<std::string> corpusLabels(const std::vector<StationPair>& pairs) {
  std::unordered_set<StationIdentifier, StationIdentifierHash> seen;
  std::vector<std::string> ret;
  for (const auto& p : pairs) {
    for (const auto* s : {&p.a, &p.b}) {
      if (seen.insert(*s).second) ret.push_back(s->label());
    }
  }
  return ret;
}

}  // namespace stationmatch
