#include <gtest/gtest.h>

#include <sstream>

#include "stationmatch/error.h"
#include "stationmatch/evaluation.h"
#include "stationmatch/osm.h"

using namespace stationmatch;

namespace {

const GroundTruth& fixtureGt() {
  static const GroundTruth gt = buildPairs(
      parseOsmFile(std::string(STATIONMATCH_FIXTURES) + "/stations.osm"));
  return gt;
}

SweepPoint point(double t, double f1) {
  SweepPoint p;
  p.t = t;
  p.mean.f1 = f1;
  return p;
}

ExperimentConfig quickConfig() {
  ExperimentConfig cfg;
  cfg.classifiers = {ClassifierSpec::parse("P"), ClassifierSpec::parse("ED"),
                     ClassifierSpec::parse("P+JW"),
                     ClassifierSpec::parse("TFIDF"),
                     ClassifierSpec::parse("PEQ"), ClassifierSpec::parse("RF")};
  cfg.trainFraction = 0.5;
  cfg.repetitions = 3;
  cfg.seed = 4;
  cfg.forest.numTrees = 10;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

// _____________________________________________________________________________
TEST(Metrics, Examples) {
  Confusion c{.tp = 8, .tn = 5, .fp = 2, .fn = 4};
  auto m = metrics(c);
  EXPECT_DOUBLE_EQ(m.precision, 0.8);
  EXPECT_DOUBLE_EQ(m.recall, 8.0 / 12);
  EXPECT_DOUBLE_EQ(m.f1, 2 * 0.8 * (8.0 / 12) / (0.8 + 8.0 / 12));
  EXPECT_TRUE(m.precisionDefined && m.recallDefined && m.f1Defined);

  // nothing flagged Similar
  auto none = metrics(Confusion{.tp = 0, .tn = 10, .fp = 0, .fn = 3});
  EXPECT_EQ(none.precision, 0);
  EXPECT_FALSE(none.precisionDefined);
  EXPECT_EQ(none.recall, 0);
  EXPECT_TRUE(none.recallDefined);
  EXPECT_EQ(none.f1, 0);
  EXPECT_TRUE(none.f1Defined);

  auto empty = metrics(Confusion{});
  EXPECT_FALSE(empty.precisionDefined || empty.recallDefined ||
               empty.f1Defined);

  Confusion sum;
  sum.add(PairClass::Similar, PairClass::Similar);
  sum.add(PairClass::Similar, PairClass::NotSimilar);
  sum.add(PairClass::NotSimilar, PairClass::Similar);
  sum.add(PairClass::NotSimilar, PairClass::NotSimilar);
  EXPECT_EQ(sum, (Confusion{.tp = 1, .tn = 1, .fp = 1, .fn = 1}));
  sum += c;
  EXPECT_EQ(sum.total(), 23u);
}

// _____________________________________________________________________________
TEST(Metrics, F1BetweenPrecisionAndRecall) {
  for (std::uint64_t tp = 0; tp < 12; ++tp) {
    for (std::uint64_t fp = 0; fp < 12; ++fp) {
      for (std::uint64_t fn = 0; fn < 12; ++fn) {
        auto m = metrics(Confusion{.tp = tp, .tn = 0, .fp = fp, .fn = fn});
        if (!m.precisionDefined || !m.recallDefined) continue;
        EXPECT_GE(m.f1, std::min(m.precision, m.recall) - 1e-12);
        EXPECT_LE(m.f1, std::max(m.precision, m.recall) + 1e-12);
        EXPECT_GE(m.f1, 0);
        EXPECT_LE(m.f1, 1);
      }
    }
  }
}

// _____________________________________________________________________________
TEST(Metrics, MeanPerField) {
  Metrics a{.precision = 0.5, .recall = 1, .f1 = 0.6};
  Metrics b{.precision = 1, .recall = 0, .f1 = 0.2, .recallDefined = false};
  auto m = meanMetrics({a, b});
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, 0.4);
  EXPECT_TRUE(m.precisionDefined);
  EXPECT_FALSE(m.recallDefined);
}

// _____________________________________________________________________________
TEST(Split, SizesAndDeterminism) {
  const auto& gt = fixtureGt();
  const std::size_t n = gt.pairs().size();
  for (double f : {0.2, 0.5, 0.8}) {
    auto s = split(gt, f, 7);
    EXPECT_EQ(s.train.size(), static_cast<std::size_t>(n * f));
    EXPECT_EQ(s.train.size() + s.test.size(), n);
    // a partition of the pairs
    GroundTruth both;
    for (const auto& p : s.train) EXPECT_TRUE(both.addPair(p));
    for (const auto& p : s.test) EXPECT_TRUE(both.addPair(p));
    for (const auto& p : gt.pairs()) EXPECT_TRUE(both.contains(p.a, p.b));
  }
  auto a = split(gt, 0.2, 1), b = split(gt, 0.2, 1), c = split(gt, 0.2, 2);
  ASSERT_EQ(a.train.size(), b.train.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].a, b.train[i].a);
    EXPECT_EQ(a.train[i].b, b.train[i].b);
    differs |= !(a.train[i].a == c.train[i].a && a.train[i].b == c.train[i].b);
  }
  EXPECT_TRUE(differs);
  EXPECT_THROW(split(gt, 0, 1), std::invalid_argument);
  EXPECT_THROW(split(gt, 1, 1), std::invalid_argument);
  EXPECT_THROW(split(GroundTruth{}, 0.5, 1), std::invalid_argument);
}

// _____________________________________________________________________________
TEST(ArgmaxF1, FirstMaximumWins) {
  EXPECT_EQ(argmaxF1({point(1, 0.2), point(2, 0.7), point(3, 0.7)}), 1u);
  EXPECT_EQ(argmaxF1({point(1, 0.9), point(2, 0.7)}), 0u);
  EXPECT_EQ(argmaxF1({point(1, 0)}), 0u);
}

// _____________________________________________________________________________
TEST(ClassifierSpec, ParseAndPrint) {
  for (std::string text : {"P", "ED", "ED:0.85", "P+TFIDF:150:0.99", "P+ED",
                           "P+BTS::0.7", "P+JW:50", "PEQ:1", "PEQ", "LEQ",
                           "RF", "TFIDF:0.5", "JAC", "J", "JW", "PED"}) {
    auto s = ClassifierSpec::parse(text);
    EXPECT_EQ(s.toString(), text);
    EXPECT_EQ(ClassifierSpec::parse(s.toString()).toString(), text);
  }
  auto combo = ClassifierSpec::parse("p+tfidf:150:0.99");
  EXPECT_EQ(combo.kind, ClassifierKind::Combo);
  EXPECT_EQ(combo.measure, Measure::Tfidf);
  EXPECT_EQ(*combo.threshold, 150);
  EXPECT_EQ(*combo.threshold2, 0.99);
  EXPECT_EQ(combo.name(), "P+TFIDF");
  for (std::string bad : {"XYZ", "ED:abc", "ED:0.5:0.5", "P+P", "RF:3",
                          "P+ED:1:2:3", "LEQ:1"}) {
    EXPECT_THROW(ClassifierSpec::parse(bad), ConfigError) << bad;
  }
  EXPECT_EQ(defaultClassifiers().size(), 12u);
}

// _____________________________________________________________________________
TEST(ExperimentConfig, Validation) {
  EXPECT_NO_THROW(ExperimentConfig{}.validate());
  auto expectBad = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), ConfigError);
  };
  expectBad([](ExperimentConfig& c) { c.classifiers.clear(); });
  expectBad([](ExperimentConfig& c) { c.trainFraction = 1; });
  expectBad([](ExperimentConfig& c) { c.repetitions = 0; });
  expectBad([](ExperimentConfig& c) { c.grids.label = {0.5, 1.0}; });
  expectBad([](ExperimentConfig& c) { c.grids.distance = {-5}; });
  expectBad([](ExperimentConfig& c) {
    c.classifiers = {ClassifierSpec::parse("ED"),
                     ClassifierSpec::parse("ED:0.5")};
  });
  expectBad([](ExperimentConfig& c) {
    c.classifiers = {ClassifierSpec::parse("ED:1.5")};
  });
  expectBad([](ExperimentConfig& c) {
    c.classifiers = {ClassifierSpec::parse("P:0")};
  });
  expectBad([](ExperimentConfig& c) { c.forest.numTrees = 0; });
  expectBad([](ExperimentConfig& c) { c.grid.numGrids = 0; });
  expectBad([](ExperimentConfig& c) {
    c.spicing = SpicingConfig{};
    c.spicing->p = -1;
  });
}

// _____________________________________________________________________________
TEST(Experiment, ReportShapeAndDeterminism) {
  auto cfg = quickConfig();
  auto rep = runExperiment(fixtureGt(), cfg);
  EXPECT_EQ(rep.numPairs, 101u);
  EXPECT_EQ(rep.numSimilar, 36u);
  ASSERT_EQ(rep.trainSizes.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(rep.trainSizes[r], 50u);
    EXPECT_EQ(rep.testSizes[r], 51u);
  }
  ASSERT_EQ(rep.results.size(), cfg.classifiers.size());
  const auto& p = rep.results[0];
  EXPECT_EQ(p.points.size(), cfg.grids.distance.size());
  EXPECT_EQ(rep.results[1].points.size(), cfg.grids.label.size());
  EXPECT_EQ(rep.results[2].points.size(),
            cfg.grids.distance.size() * cfg.grids.label.size());
  EXPECT_FALSE(rep.results[4].swept());
  EXPECT_FALSE(rep.results[5].swept());
  for (const auto& r : rep.results) {
    EXPECT_EQ(r.best, argmaxF1(r.points));
    for (const auto& pt : r.points) {
      ASSERT_EQ(pt.perRepetition.size(), 3u);
      double sum = 0;
      for (const auto& m : pt.perRepetition) sum += m.f1;
      EXPECT_NEAR(pt.mean.f1, sum / 3, 1e-12);
    }
  }
  for (std::size_t i = 1; i < p.points.size(); ++i) {
    EXPECT_LT(p.points[i - 1].t, p.points[i].t);
  }

  auto again = runExperiment(fixtureGt(), cfg);
  EXPECT_EQ(reportJson(rep)["body"].dump(), reportJson(again)["body"].dump());
  EXPECT_TRUE(reportJson(rep).contains("timing"));
  EXPECT_FALSE(reportText(rep).empty());

  cfg.threads = 1;
  auto serial = runExperiment(fixtureGt(), cfg);
  EXPECT_EQ(reportJson(rep)["body"].dump(), reportJson(serial)["body"].dump());
}

// _____________________________________________________________________________
TEST(Experiment, FixedThresholdsAreNotSwept) {
  auto cfg = quickConfig();
  cfg.classifiers = {ClassifierSpec::parse("P:80"),
                     ClassifierSpec::parse("P+ED:80"),
                     ClassifierSpec::parse("P+JW::0.5")};
  auto rep = runExperiment(fixtureGt(), cfg);
  EXPECT_EQ(rep.results[0].points.size(), 1u);
  EXPECT_EQ(rep.results[0].points[0].t, 80);
  EXPECT_EQ(rep.results[1].points.size(), cfg.grids.label.size());
  EXPECT_EQ(rep.results[2].points.size(), cfg.grids.distance.size());
  for (const auto& pt : rep.results[2].points) EXPECT_EQ(*pt.t2, 0.5);
}

// _____________________________________________________________________________
TEST(Experiment, SweepCsv) {
  auto cfg = quickConfig();
  cfg.classifiers = {ClassifierSpec::parse("ED"),
                     ClassifierSpec::parse("P+ED")};
  cfg.grids.label = {0.5, 0.9};
  cfg.grids.distance = {50, 100};
  auto rep = runExperiment(fixtureGt(), cfg);
  std::ostringstream a, b;
  writeSweepCsv(a, rep.results[0]);
  writeSweepCsv(b, rep.results[1]);
  std::istringstream ia(a.str()), ib(b.str());
  std::string line;
  std::getline(ia, line);
  EXPECT_EQ(line, "t,precision,recall,f1");
  int rows = 0;
  while (std::getline(ia, line)) ++rows;
  EXPECT_EQ(rows, 2);
  std::getline(ib, line);
  EXPECT_EQ(line, "t,t2,precision,recall,f1");
  rows = 0;
  while (std::getline(ib, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

// _____________________________________________________________________________
TEST(Experiment, RepetitionSeedsDiffer) {
  EXPECT_EQ(repetitionSeed(3, 0), repetitionSeed(3, 0));
  EXPECT_NE(repetitionSeed(3, 0), repetitionSeed(3, 1));
  EXPECT_NE(repetitionSeed(3, 0), repetitionSeed(4, 0));
}
