#ifndef STATIONMATCH_EVALUATION_H_
#define STATIONMATCH_EVALUATION_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "stationmatch/classifier.h"
#include "stationmatch/forest.h"
#include "stationmatch/normalize.h"
#include "stationmatch/osm.h"
#include "stationmatch/station.h"

namespace stationmatch {

// Positive class is Similar.
struct Confusion {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;

  void add(PairClass truth, PairClass predicted);
  std::uint64_t total() const { return tp + tn + fp + fn; }
  Confusion& operator+=(const Confusion& o);
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Undefined ratios (zero denominator) are reported as 0 with the flag off.
struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  bool precisionDefined = true;
  bool recallDefined = true;
  bool f1Defined = true;
};

Metrics metrics(const Confusion& c);
// Arithmetic mean per field; a flag stays set only if set in every input.
Metrics meanMetrics(const std::vector<Metrics>& ms);

struct Split {
  std::vector<StationPair> train;
  std::vector<StationPair> test;
};

// Uniform pair-level split: floor(n * fraction) pairs go to train, the rest
// to test. Requires 0 < fraction < 1 and a non-empty ground truth.
Split split(const GroundTruth& gt, double fraction, std::uint64_t seed);

enum class ClassifierKind { Measure, Combo, Forest, Peq, Leq };

// One classifier of an experiment. Thresholds that are not fixed are swept.
//   Measure: a single thresholded measure (P, ED, ...)
//   Combo:   P + a label measure, soft voting
//   Forest:  the random forest on trigram/grid features
//   Peq/Leq: position / label equivalency
// Text form: NAME[:t[:t2]], e.g. "ED", "ED:0.85", "P+TFIDF:150:0.99",
// "PEQ:1", "RF".
struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Measure;
  Measure measure = Measure::Position;  // Measure, or the label side of Combo
  std::optional<double> threshold;      // meters for P / the P side of Combo
  std::optional<double> threshold2;     // label side of Combo

  static ClassifierSpec parse(std::string_view text);
  std::string name() const;      // without thresholds
  std::string toString() const;  // round-trips through parse
};

// The classifiers evaluated by default.
std::vector<ClassifierSpec> defaultClassifiers();

struct SweepGrids {
  // 0.05, 0.10, ..., 0.95, 0.99
  std::vector<double> label = defaultLabelGrid();
  // 5, 10, ..., 200, 250, 500, 1000 (meters)
  std::vector<double> distance = defaultDistanceGrid();

  static std::vector<double> defaultLabelGrid();
  static std::vector<double> defaultDistanceGrid();
};

struct ExperimentConfig {
  std::vector<ClassifierSpec> classifiers = defaultClassifiers();
  double trainFraction = 0.2;
  int repetitions = 5;
  std::uint64_t seed = 0;
  SweepGrids grids;
  // Applied to every label before any measure or feature sees it.
  std::shared_ptr<const Normalizer> normalizer;
  // Applied once to the whole ground truth before splitting.
  std::optional<SpicingConfig> spicing;
  ForestParams forest;
  std::size_t topK = 2500;
  GridSpec grid;
  BtsOptions bts;
  double peqEpsilon = 1;  // meters
  unsigned threads = 0;

  // Throws ConfigError.
  void validate() const;
  nlohmann::json toJson() const;
};

struct SweepPoint {
  double t = 0;
  std::optional<double> t2;
  std::vector<Metrics> perRepetition;
  Metrics mean;
};

struct ClassifierResult {
  ClassifierSpec spec;
  std::vector<SweepPoint> points;  // one point unless a threshold is swept
  std::size_t best = 0;            // argmax of mean F1, ties -> smaller t
  double seconds = 0;

  const SweepPoint& bestPoint() const { return points[best]; }
  bool swept() const { return points.size() > 1; }
};

struct Report {
  ExperimentConfig config;
  std::size_t numPairs = 0;
  std::size_t numSimilar = 0;
  std::vector<std::size_t> trainSizes, testSizes;  // per repetition
  std::vector<ClassifierResult> results;
  double seconds = 0;
};

// Index of the best mean F1 (first on ties; points are in ascending t, t2).
std::size_t argmaxF1(const std::vector<SweepPoint>& points);

// Evaluates one classifier on precomputed train/test splits (one per
// repetition). Sweeps every threshold the spec leaves open.
ClassifierResult evaluateClassifier(const ClassifierSpec& spec,
                                    const std::vector<Split>& splits,
                                    const ExperimentConfig& cfg);

// Spices (if configured), draws one split per repetition shared by all
// classifiers, and evaluates each classifier on it.
Report runExperiment(const GroundTruth& gt, const ExperimentConfig& cfg);

// Per-repetition split seeds derived from cfg.seed.
std::uint64_t repetitionSeed(std::uint64_t seed, int repetition);

// "body" is deterministic for a fixed config and input; wall-clock times are
// kept apart under "timing".
nlohmann::json reportJson(const Report& r);
std::string reportText(const Report& r);
// Header t,precision,recall,f1 (t,t2,... for combinations).
void writeSweepCsv(std::ostream& out, const ClassifierResult& r);

}  // namespace stationmatch

#endif  // STATIONMATCH_EVALUATION_H_
