#include "stationmatch/similarity.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "stationmatch/text.h"

namespace stationmatch {

// _____________________________________________________________________________
std::size_t editDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// _____________________________________________________________________________
std::size_t editDistance(std::string_view a, std::string_view b) {
  return editDistance(toCodepoints(a), toCodepoints(b));
}

// _____________________________________________________________________________
double edSimilarity(std::u32string_view a, std::u32string_view b) {
  std::size_t maxLen = std::max(a.size(), b.size());
  if (maxLen == 0) return 1.0;
  return 1.0 - static_cast<double>(editDistance(a, b)) / maxLen;
}

// _____________________________________________________________________________
double edSimilarity(std::string_view a, std::string_view b) {
  return edSimilarity(toCodepoints(a), toCodepoints(b));
}

// _____________________________________________________________________________
std::size_t prefixEditDistance(std::u32string_view a, std::u32string_view b) {
  // rows over a, columns over prefixes of b; result is min of the last row
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return *std::min_element(prev.begin(), prev.end());
}

namespace {

double pedDirectional(std::u32string_view a, std::u32string_view b) {
  if (a.empty()) return b.empty() ? 1.0 : 0.0;
  return 1.0 - static_cast<double>(prefixEditDistance(a, b)) / a.size();
}

}  // namespace

// _____________________________________________________________________________
double pedSimilarity(std::string_view a, std::string_view b) {
  auto ca = toCodepoints(a);
  auto cb = toCodepoints(b);
  return std::max(pedDirectional(ca, cb), pedDirectional(cb, ca));
}

// _____________________________________________________________________________
double jaro(std::u32string_view a, std::u32string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;

  const std::size_t maxLen = std::max(a.size(), b.size());
  const std::size_t window = maxLen / 2 > 0 ? maxLen / 2 - 1 : 0;

  std::vector<char> matchedA(a.size(), 0), matchedB(b.size(), 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t lo = i > window ? i - window : 0;
    std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (matchedB[j] || a[i] != b[j]) continue;
      matchedA[i] = matchedB[j] = 1;
      ++matches;
      break;
    }
  }
  if (matches == 0) return 0.0;

  std::size_t halfTranspositions = 0;
  for (std::size_t i = 0, j = 0; i < a.size(); ++i) {
    if (!matchedA[i]) continue;
    while (!matchedB[j]) ++j;
    if (a[i] != b[j]) ++halfTranspositions;
    ++j;
  }

  double m = static_cast<double>(matches);
  double t = halfTranspositions / 2.0;
  return (m / a.size() + m / b.size() + (m - t) / m) / 3.0;
}

// _____________________________________________________________________________
double jaro(std::string_view a, std::string_view b) {
  return jaro(toCodepoints(a), toCodepoints(b));
}

// _____________________________________________________________________________
double jaroWinkler(std::string_view a, std::string_view b) {
  auto ca = toCodepoints(a);
  auto cb = toCodepoints(b);
  double j = jaro(ca, cb);
  std::size_t prefix = 0;
  while (prefix < 4 && prefix < ca.size() && prefix < cb.size() &&
         ca[prefix] == cb[prefix]) {
    ++prefix;
  }
  return j + prefix * 0.1 * (1.0 - j);
}

// _____________________________________________________________________________
double jaccard(std::string_view a, std::string_view b) {
  auto ta = tokenize(a);
  auto tb = tokenize(b);
  std::set<std::string> sa(ta.begin(), ta.end());
  std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  return static_cast<double>(common) / (sa.size() + sb.size() - common);
}

// _____________________________________________________________________________
std::size_t orderedSubsetCount(std::size_t n) {
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t term = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t factor = n - k + 1;
    if (term > kMax / factor) return kMax;
    term *= factor;
    if (total > kMax - term) return kMax;
    total += term;
  }
  return total;
}

namespace {

void extendPermutations(
    const std::vector<std::u32string>& tokens, std::vector<char>& used,
    std::u32string& cur,
    const std::function<void(const std::u32string&)>& emit) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (used[i]) continue;
    std::size_t oldLen = cur.size();
    if (!cur.empty()) cur.push_back(U' ');
    cur += tokens[i];
    emit(cur);
    used[i] = 1;
    extendPermutations(tokens, used, cur, emit);
    used[i] = 0;
    cur.resize(oldLen);
  }
}

void forEachPermutation(
    const std::vector<std::string>& tokens,
    const std::function<void(const std::u32string&)>& emit) {
  std::vector<std::u32string> cps;
  cps.reserve(tokens.size());
  for (const auto& t : tokens) cps.push_back(toCodepoints(t));
  std::vector<char> used(cps.size(), 0);
  std::u32string cur;
  extendPermutations(cps, used, cur, emit);
}

bool btsFallsBack(std::size_t na, std::size_t nb, const BtsOptions& opts) {
  switch (opts.fallback) {
    case BtsFallback::PermutationCount:
      return orderedSubsetCount(na) > opts.limit ||
             orderedSubsetCount(nb) > opts.limit;
    case BtsFallback::TokenCount:
      return na > opts.limit || nb > opts.limit;
    case BtsFallback::Never:
      return false;
  }
  return false;
}

}  // namespace

// _____________________________________________________________________________
std::vector<std::string> tokenPermutations(
    const std::vector<std::string>& tokens) {
  std::vector<std::string> ret;
  forEachPermutation(
      tokens, [&](const std::u32string& s) { ret.push_back(toUtf8(s)); });
  return ret;
}

// _____________________________________________________________________________
double bts(std::string_view a, std::string_view b, const BtsOptions& opts) {
  // identical labels score 1 even when their separators are not single
  // spaces (the joined candidates would then differ from the raw label)
  if (a == b) return 1.0;
  auto ta = tokenize(a);
  auto tb = tokenize(b);
  if (ta.empty() && tb.empty()) return edSimilarity(a, b);
  if (btsFallsBack(ta.size(), tb.size(), opts)) return jaccard(a, b);

  auto ca = toCodepoints(a);
  auto cb = toCodepoints(b);
  double best = 0.0;
  forEachPermutation(ta, [&](const std::u32string& cand) {
    best = std::max(best, edSimilarity(cand, cb));
  });
  forEachPermutation(tb, [&](const std::u32string& cand) {
    best = std::max(best, edSimilarity(cand, ca));
  });
  return best;
}

// _____________________________________________________________________________
TfidfModel TfidfModel::train(const std::vector<std::string>& labels) {
  if (labels.empty()) throw std::invalid_argument("TFIDF corpus is empty");
  TfidfModel m;
  m._numDocs = labels.size();
  for (const auto& label : labels) {
    auto tokens = tokenize(label);
    std::set<std::string> unique(tokens.begin(), tokens.end());
    for (const auto& t : unique) m._docFreq[t]++;
  }
  return m;
}

// _____________________________________________________________________________
std::size_t TfidfModel::docFreq(const std::string& token) const {
  auto it = _docFreq.find(token);
  return it == _docFreq.end() ? 0 : it->second;
}

// _____________________________________________________________________________
double TfidfModel::idf(const std::string& token) const {
  std::size_t df = std::max<std::size_t>(docFreq(token), 1);
  return std::log(static_cast<double>(_numDocs) / df);
}

// _____________________________________________________________________________
double TfidfModel::similarity(std::string_view a, std::string_view b) const {
  auto ta = tokenize(a);
  auto tb = tokenize(b);
  if (ta.empty() && tb.empty()) return 1.0;

  auto weights = [this](const std::vector<std::string>& tokens) {
    std::map<std::string, double> tf;
    for (const auto& t : tokens) tf[t] += 1.0;
    for (auto& [t, w] : tf) w *= idf(t);
    return tf;
  };
  auto wa = weights(ta);
  auto wb = weights(tb);

  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, w] : wa) {
    na += w * w;
    auto it = wb.find(t);
    if (it != wb.end()) dot += w * it->second;
  }
  for (const auto& [t, w] : wb) nb += w * w;
  if (na == 0 || nb == 0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

}  // namespace stationmatch
