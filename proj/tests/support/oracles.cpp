#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace stationmatch::oracle {

// _____________________________________________________________________________
bool isSeparator(char32_t c) { return c == U' ' || c == U'-' || c == U','; }

// _____________________________________________________________________________
std::string encodeUtf8(const std::u32string& s) {
  std::string ret;
  for (char32_t c : s) {
    if (c < 0x80) {
      ret.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      ret.push_back(static_cast<char>(0xC0 | (c >> 6)));
      ret.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      ret.push_back(static_cast<char>(0xE0 | (c >> 12)));
      ret.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      ret.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      ret.push_back(static_cast<char>(0xF0 | (c >> 18)));
      ret.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      ret.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      ret.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return ret;
}

// _____________________________________________________________________________
std::u32string randomString(std::uint64_t& state, std::size_t maxLen,
                            const std::u32string& alphabet) {
  // xorshift64*, kept separate from the library generator
  auto next = [&state] {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return state * 0x2545F4914F6CDD1DULL;
  };
  std::size_t len = next() % (maxLen + 1);
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i) {
    s.push_back(alphabet[next() % alphabet.size()]);
  }
  return s;
}

namespace {

std::size_t edRec(const std::u32string& a, const std::u32string& b,
                  std::size_t i, std::size_t j,
                  std::map<std::pair<std::size_t, std::size_t>, std::size_t>&
                      memo) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  auto key = std::make_pair(i, j);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::size_t best;
  if (a[i] == b[j]) {
    best = edRec(a, b, i + 1, j + 1, memo);
  } else {
    best = 1 + std::min({edRec(a, b, i + 1, j, memo),
                         edRec(a, b, i, j + 1, memo),
                         edRec(a, b, i + 1, j + 1, memo)});
  }
  memo[key] = best;
  return best;
}

}  // namespace

// _____________________________________________________________________________
std::size_t editDistance(const std::u32string& a, const std::u32string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  return edRec(a, b, 0, 0, memo);
}

// _____________________________________________________________________________
double edSimilarity(const std::u32string& a, const std::u32string& b) {
  if (a.empty() && b.empty()) return 1.0;
  double m = static_cast<double>(std::max(a.size(), b.size()));
  return 1.0 - editDistance(a, b) / m;
}

// _____________________________________________________________________________
std::size_t prefixEditDistance(const std::u32string& a,
                               const std::u32string& b) {
  std::size_t best = editDistance(a, U"");
  for (std::size_t len = 1; len <= b.size(); ++len) {
    best = std::min(best, editDistance(a, b.substr(0, len)));
  }
  return best;
}

// _____________________________________________________________________________
double pedSimilarity(const std::u32string& a, const std::u32string& b) {
  if (a.empty() && b.empty()) return 1.0;
  double ab = a.empty() ? 0.0
                        : 1.0 - static_cast<double>(prefixEditDistance(a, b)) /
                                    static_cast<double>(a.size());
  double ba = b.empty() ? 0.0
                        : 1.0 - static_cast<double>(prefixEditDistance(b, a)) /
                                    static_cast<double>(b.size());
  return std::max(ab, ba);
}

// _____________________________________________________________________________
double jaro(const std::u32string& a, const std::u32string& b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  long maxLen = static_cast<long>(std::max(a.size(), b.size()));
  long window = std::max(maxLen / 2 - 1, 0L);

  // characters of a, in order, that find a partner in b
  std::vector<bool> taken(b.size(), false);
  std::u32string fromA;
  for (long i = 0; i < static_cast<long>(a.size()); ++i) {
    for (long j = std::max(0L, i - window);
         j <= std::min(static_cast<long>(b.size()) - 1, i + window); ++j) {
      if (!taken[j] && a[i] == b[j]) {
        taken[j] = true;
        fromA.push_back(a[i]);
        break;
      }
    }
  }
  std::u32string fromB;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (taken[j]) fromB.push_back(b[j]);
  }
  double m = static_cast<double>(fromA.size());
  if (m == 0) return 0.0;
  double mismatched = 0;
  for (std::size_t k = 0; k < fromA.size(); ++k) {
    if (fromA[k] != fromB[k]) mismatched += 1;
  }
  double t = mismatched / 2;
  return (m / a.size() + m / b.size() + (m - t) / m) / 3;
}

// _____________________________________________________________________________
double jaroWinkler(const std::u32string& a, const std::u32string& b) {
  double j = jaro(a, b);
  int l = 0;
  while (l < 4 && l < static_cast<int>(a.size()) &&
         l < static_cast<int>(b.size()) && a[l] == b[l]) {
    ++l;
  }
  return j + l * 0.1 * (1 - j);
}

// _____________________________________________________________________________
std::vector<std::u32string> tokens(const std::u32string& s) {
  std::vector<std::u32string> ret;
  std::u32string cur;
  for (char32_t c : s) {
    if (isSeparator(c)) {
      if (!cur.empty()) ret.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) ret.push_back(cur);
  return ret;
}

// _____________________________________________________________________________
double jaccard(const std::u32string& a, const std::u32string& b) {
  auto ta = tokens(a);
  auto tb = tokens(b);
  std::set<std::u32string> sa(ta.begin(), ta.end());
  std::set<std::u32string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::set<std::u32string> both, either;
  for (const auto& t : sa) {
    either.insert(t);
    if (sb.count(t)) both.insert(t);
  }
  for (const auto& t : sb) either.insert(t);
  return static_cast<double>(both.size()) / either.size();
}

namespace {

double btsOneWay(const std::u32string& a, const std::u32string& b) {
  auto ta = tokens(a);
  double best = 0;
  std::size_t n = ta.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    do {
      std::u32string cand;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k > 0) cand.push_back(U' ');
        cand += ta[idx[k]];
      }
      best = std::max(best, edSimilarity(cand, b));
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
  return best;
}

}  // namespace

// _____________________________________________________________________________
double bts(const std::u32string& a, const std::u32string& b) {
  if (a == b) return 1.0;  // declared identity convention
  if (tokens(a).empty() && tokens(b).empty()) return edSimilarity(a, b);
  return std::max(btsOneWay(a, b), btsOneWay(b, a));
}

// _____________________________________________________________________________
double tfidf(const std::vector<std::u32string>& corpus,
             const std::u32string& a, const std::u32string& b) {
  auto ta = tokens(a);
  auto tb = tokens(b);
  if (ta.empty() && tb.empty()) return 1.0;
  auto idf = [&corpus](const std::u32string& t) {
    double df = 0;
    for (const auto& doc : corpus) {
      auto d = tokens(doc);
      if (std::find(d.begin(), d.end(), t) != d.end()) df += 1;
    }
    return std::log(corpus.size() / std::max(df, 1.0));
  };
  std::set<std::u32string> vocab(ta.begin(), ta.end());
  vocab.insert(tb.begin(), tb.end());
  double dot = 0, na = 0, nb = 0;
  for (const auto& t : vocab) {
    double w = idf(t);
    double ca = static_cast<double>(std::count(ta.begin(), ta.end(), t));
    double cb = static_cast<double>(std::count(tb.begin(), tb.end(), t));
    dot += ca * w * cb * w;
    na += ca * w * ca * w;
    nb += cb * w * cb * w;
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::min(1.0, dot / std::sqrt(na * nb));
}

}  // namespace stationmatch::oracle
