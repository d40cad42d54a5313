#include <gtest/gtest.h>

#include <sstream>
#include <stdexcept>

#include "oracles.h"
#include "stationmatch/features.h"
#include "stationmatch/text.h"

using namespace stationmatch;

namespace {

// The fifteen trigram columns of the published feature table, in order.
TrigramVocabulary publishedVocabulary() {
  return TrigramVocabulary({"rei", "tra", "raß", "aße", "urg", "bur", "ibu",
                            " Fr", "Fre", "eib", "rg ", "eis", "Bre", "sga",
                            "isg"});
}

struct PublishedRow {
  StationIdentifier a, b;
  int d3g;
  std::vector<int> diff;
};

std::vector<PublishedRow> publishedRows() {
  return {
      {{"Freiburg im Breisgau Hauptbahnhof", 47.9966, 7.8404},
       {"Hauptbahnhof", 47.9965, 7.8407},
       20,
       {-2, 0, 0, 0, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1}},
      {{"Okenstraße", 48.0105, 7.8545},
       {"Nordstraße", 48.0111, 7.8541},
       10,
       {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {{"ZOB", 47.9959, 7.8405},
       {"Zentraler Omnibusbahnhof, Freiburg im Breisgau", 47.9960, 7.8407},
       47,
       {2, 1, 0, 0, 1, 1, 2, 1, 1, 1, 1, 1, 1, 1, 1}},
  };
}

std::string randomLabel(std::uint64_t& state) {
  return "x" + oracle::encodeUtf8(oracle::randomString(state, 10));
}

}  // namespace

// _____________________________________________________________________________
TEST(Vocabulary, BuildRanksByCountThenBytes) {
  auto v = TrigramVocabulary::build({"aa"}, 10);
  EXPECT_EQ(v.trigrams(), (std::vector<std::string>{" aa", "aa "}));
  auto one = TrigramVocabulary::build({"aaaa", "ab"}, 1);
  EXPECT_EQ(one.trigrams(), (std::vector<std::string>{"aaa"}));
  auto all = TrigramVocabulary::build({"London", "Londonderry"}, 1000);
  EXPECT_EQ(all.size(), 11u);
  EXPECT_EQ(all.indexOf("ond"), 0u);  // three occurrences
  EXPECT_EQ(all.indexOf(" Lo"), 1u);
  EXPECT_EQ(all.indexOf("Lon"), 2u);
  EXPECT_FALSE(all.indexOf("xyz"));
  EXPECT_THROW(TrigramVocabulary::build({"a"}, 0), std::invalid_argument);
  EXPECT_THROW(TrigramVocabulary::build({}, 5), std::invalid_argument);
  EXPECT_THROW(TrigramVocabulary({"abc", "abc"}), std::invalid_argument);
}

// _____________________________________________________________________________
TEST(Features, PublishedTrigramColumns) {
  FeatureExtractor fx(publishedVocabulary(), GridSpec{});
  for (const auto& row : publishedRows()) {
    auto fv = fx.extract(view(row.a, row.b));
    EXPECT_EQ(fv.trigramMismatch, row.d3g) << row.a.label();
    EXPECT_EQ(fv.trigramDiff, row.diff) << row.a.label();
    ASSERT_EQ(fv.grid.size(), 2u);
    EXPECT_EQ(fv.grid[0], (GridCoord{0, 133, 196}));
    EXPECT_EQ(fv.grid[1], (GridCoord{1, 133, 195}));
    EXPECT_DOUBLE_EQ(fv.distance, geoDistance(row.a.pos(), row.b.pos()));
  }
  EXPECT_EQ(trigramMismatch("Freiburg im Breisgau Hauptbahnhof",
                            "Hauptbahnhof"),
            20);
  EXPECT_EQ(trigramMismatch("ZOB",
                            "Zentraler Omnibusbahnhof, Freiburg im Breisgau"),
            47);
}

// _____________________________________________________________________________
TEST(Features, IdenticalIdentifiers) {
  FeatureExtractor fx(publishedVocabulary(), GridSpec{});
  StationIdentifier a("Freiburg Hbf", 47.9977, 7.8421);
  auto fv = fx.extract(view(a, a));
  EXPECT_EQ(fv.distance, 0);
  EXPECT_EQ(fv.trigramMismatch, 0);
  for (int d : fv.trigramDiff) EXPECT_EQ(d, 0);
}

// _____________________________________________________________________________
TEST(Features, FlattenLayoutAndColumnNames) {
  FeatureExtractor fx(TrigramVocabulary({"rei", " Fr"}), GridSpec{256, 2});
  auto names = fx.columnNames();
  EXPECT_EQ(names, (std::vector<std::string>{"d_m", "d_3g", "x0", "y0", "x1",
                                             "y1", "tri:rei", "tri: Fr"}));
  EXPECT_EQ(fx.numFeatures(), names.size());
  const auto row = publishedRows()[0];
  auto flat = fx.extract(view(row.a, row.b)).flatten();
  ASSERT_EQ(flat.size(), 8u);
  EXPECT_FLOAT_EQ(flat[0], static_cast<float>(
                               geoDistance(row.a.pos(), row.b.pos())));
  EXPECT_EQ(flat[1], 20);
  EXPECT_EQ(flat[2], 133);
  EXPECT_EQ(flat[3], 196);
  EXPECT_EQ(flat[4], 133);
  EXPECT_EQ(flat[5], 195);
  EXPECT_EQ(flat[6], -2);
  EXPECT_EQ(flat[7], -1);
}

// _____________________________________________________________________________
TEST(Features, SwapNegatesTrigramDiffsOnly) {
  std::uint64_t state = 31;
  std::vector<std::string> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(randomLabel(state));
  FeatureExtractor fx(TrigramVocabulary::build(corpus, 50), GridSpec{});
  for (int i = 0; i < 500; ++i) {
    StationIdentifier a(randomLabel(state), 47.99, 7.84 + i * 1e-4);
    StationIdentifier b(randomLabel(state), 48.0, 7.85 - i * 1e-4);
    auto ab = fx.extract(view(a, b));
    auto ba = fx.extract(view(b, a));
    EXPECT_EQ(ab.distance, ba.distance);
    EXPECT_EQ(ab.trigramMismatch, ba.trigramMismatch);
    EXPECT_EQ(ab.grid, ba.grid);
    ASSERT_EQ(ab.trigramDiff.size(), ba.trigramDiff.size());
    for (std::size_t k = 0; k < ab.trigramDiff.size(); ++k) {
      EXPECT_EQ(ab.trigramDiff[k], -ba.trigramDiff[k]);
    }
    // absent from both labels -> 0
    auto ta = trigrams(a.label()), tb = trigrams(b.label());
    const auto& vocab = fx.vocabulary().trigrams();
    for (std::size_t k = 0; k < vocab.size(); ++k) {
      if (!ta.count(vocab[k]) && !tb.count(vocab[k])) {
        EXPECT_EQ(ab.trigramDiff[k], 0);
      }
    }
    EXPECT_EQ(ab.trigramMismatch == 0,
              trigramSet(a.label()) == trigramSet(b.label()));
    // deterministic
    EXPECT_EQ(fx.extract(view(a, b)).flatten(), ab.flatten());
  }
}

// _____________________________________________________________________________
TEST(Features, MismatchZeroOnlyForEqualSets) {
  EXPECT_EQ(trigramMismatch("aaaa", "aaa"), 0);  // same set, other counts
  EXPECT_EQ(trigramMismatch("abc", "abc"), 0);
  EXPECT_GT(trigramMismatch("abc", "abd"), 0);
  std::uint64_t state = 8;
  for (int i = 0; i < 1000; ++i) {
    auto a = randomLabel(state), b = randomLabel(state);
    EXPECT_EQ(trigramMismatch(a, b) == 0, trigramSet(a) == trigramSet(b));
    EXPECT_EQ(trigramMismatch(a, b), trigramMismatch(b, a));
  }
}

// _____________________________________________________________________________
TEST(Features, CorpusAndMatrixExport) {
  StationIdentifier a("A", 0, 0), b("B", 0, 0.001), c("C", 0, 0.002);
  std::vector<StationPair> pairs = {{a, b, PairClass::Similar},
                                    {b, c, PairClass::NotSimilar},
                                    {a, c, PairClass::NotSimilar}};
  EXPECT_EQ(corpusLabels(pairs), (std::vector<std::string>{"A", "B", "C"}));
  FeatureExtractor fx(TrigramVocabulary({" A "}), GridSpec{16, 1});
  std::ostringstream out;
  writeFeatureMatrixTsv(out, fx, pairs);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "d_m\td_3g\tx0\ty0\ttri: A \tclass");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 3);
}
