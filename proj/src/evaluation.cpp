#include "stationmatch/evaluation.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "stationmatch/error.h"
#include "stationmatch/features.h"
#include "stationmatch/parallel.h"
#include "stationmatch/random.h"

namespace stationmatch {

using nlohmann::json;

// _____________________________________________________________________________
void Confusion::add(PairClass truth, PairClass predicted) {
  bool t = truth == PairClass::Similar;
  bool p = predicted == PairClass::Similar;
  if (t && p) {
    ++tp;
  } else if (t) {
    ++fn;
  } else if (p) {
    ++fp;
  } else {
    ++tn;
  }
}

// _____________________________________________________________________________
Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

// _____________________________________________________________________________
Metrics metrics(const Confusion& c) {
  Metrics m;
  auto ratio = [](double num, double den, bool& defined) {
    defined = den > 0;
    return defined ? num / den : 0.0;
  };
  double tp = static_cast<double>(c.tp);
  m.precision = ratio(tp, tp + c.fp, m.precisionDefined);
  m.recall = ratio(tp, tp + c.fn, m.recallDefined);
  // harmonic mean of precision and recall, written without them
  m.f1 = ratio(2 * tp, 2 * tp + c.fp + c.fn, m.f1Defined);
  return m;
}

// _____________________________________________________________________________
Metrics meanMetrics(const std::vector<Metrics>& ms) {
  Metrics ret;
  if (ms.empty()) return ret;
  for (const auto& m : ms) {
    ret.precision += m.precision;
    ret.recall += m.recall;
    ret.f1 += m.f1;
    ret.precisionDefined = ret.precisionDefined && m.precisionDefined;
    ret.recallDefined = ret.recallDefined && m.recallDefined;
    ret.f1Defined = ret.f1Defined && m.f1Defined;
  }
  ret.precision /= ms.size();
  ret.recall /= ms.size();
  ret.f1 /= ms.size();
  return ret;
}

// _____________________________________________________________________________
Split split(const GroundTruth& gt, double fraction, std::uint64_t seed) {
  if (!(fraction > 0 && fraction < 1)) {
    throw std::invalid_argument("train fraction must be in (0, 1)");
  }
  const auto& pairs = gt.pairs();
  if (pairs.empty()) throw std::invalid_argument("ground truth is empty");
  std::vector<std::size_t> idx(pairs.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx.begin(), idx.end());
  auto nTrain = static_cast<std::size_t>(
      std::floor(static_cast<double>(pairs.size()) * fraction));
  Split s;
  s.train.reserve(nTrain);
  s.test.reserve(pairs.size() - nTrain);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    (i < nTrain ? s.train : s.test).push_back(pairs[idx[i]]);
  }
  return s;
}

// _____________________________________________________________________________
ClassifierSpec ClassifierSpec::parse(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    auto end = text.find(':', pos);
    parts.emplace_back(text.substr(pos, end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  std::string name = parts[0];
  for (auto& c : name) c = static_cast<char>(std::toupper(c));

  auto number = [&](std::size_t i) {
    auto v = parseDouble(parts[i]);
    if (!v) {
      throw ConfigError("bad threshold '" + parts[i] + "' in classifier '" +
                        std::string(text) + "'");
    }
    return *v;
  };
  auto maxParts = [&](std::size_t n) {
    if (parts.size() > n) {
      throw ConfigError("too many thresholds in classifier '" +
                        std::string(text) + "'");
    }
  };

  ClassifierSpec s;
  if (name == "RF") {
    maxParts(1);
    s.kind = ClassifierKind::Forest;
  } else if (name == "LEQ") {
    maxParts(1);
    s.kind = ClassifierKind::Leq;
  } else if (name == "PEQ") {
    maxParts(2);
    s.kind = ClassifierKind::Peq;
    if (parts.size() > 1) s.threshold = number(1);
  } else if (name.rfind("P+", 0) == 0) {
    maxParts(3);
    auto m = parseMeasure(name.substr(2));
    if (!m || *m == Measure::Position) {
      throw ConfigError("unknown classifier '" + std::string(text) + "'");
    }
    s.kind = ClassifierKind::Combo;
    s.measure = *m;
    if (parts.size() > 1 && !parts[1].empty()) s.threshold = number(1);
    if (parts.size() > 2 && !parts[2].empty()) s.threshold2 = number(2);
  } else {
    maxParts(2);
    auto m = parseMeasure(name);
    if (!m) throw ConfigError("unknown classifier '" + std::string(text) + "'");
    s.kind = ClassifierKind::Measure;
    s.measure = *m;
    if (parts.size() > 1) s.threshold = number(1);
  }
  return s;
}

// _____________________________________________________________________________
std::string ClassifierSpec::name() const {
  switch (kind) {
    case ClassifierKind::Measure:
      return std::string(measureName(measure));
    case ClassifierKind::Combo:
      return "P+" + std::string(measureName(measure));
    case ClassifierKind::Forest:
      return "RF";
    case ClassifierKind::Peq:
      return "PEQ";
    case ClassifierKind::Leq:
      return "LEQ";
  }
  return "?";
}

// _____________________________________________________________________________
std::string ClassifierSpec::toString() const {
  std::string s = name();
  if (kind == ClassifierKind::Combo) {
    if (threshold || threshold2) {
      s += ":" + (threshold ? formatDouble(*threshold) : "");
      if (threshold2) s += ":" + formatDouble(*threshold2);
    }
  } else if (threshold) {
    s += ":" + formatDouble(*threshold);
  }
  return s;
}

// _____________________________________________________________________________
std::vector<ClassifierSpec> defaultClassifiers() {
  std::vector<ClassifierSpec> ret;
  for (auto name : {"P", "ED", "PED", "J", "JW", "JAC", "BTS", "TFIDF",
                    "P+ED", "P+BTS", "P+TFIDF", "RF"}) {
    ret.push_back(ClassifierSpec::parse(name));
  }
  return ret;
}

// _____________________________________________________________________________
std::vector<double> SweepGrids::defaultLabelGrid() {
  std::vector<double> g;
  for (int i = 1; i <= 19; ++i) g.push_back(i / 20.0);
  g.push_back(0.99);
  return g;
}

// _____________________________________________________________________________
std::vector<double> SweepGrids::defaultDistanceGrid() {
  std::vector<double> g;
  for (int d = 5; d <= 200; d += 5) g.push_back(d);
  for (double d : {250.0, 500.0, 1000.0}) g.push_back(d);
  return g;
}

namespace {

bool validLabelThreshold(double t) { return t > 0 && t < 1; }
bool validDistance(double t) { return t > 0 && std::isfinite(t); }

bool needsTraining(const ClassifierSpec& s) {
  return s.kind == ClassifierKind::Forest ||
         ((s.kind == ClassifierKind::Measure ||
           s.kind == ClassifierKind::Combo) &&
          s.measure == Measure::Tfidf);
}

const char* btsFallbackName(BtsFallback f) {
  switch (f) {
    case BtsFallback::PermutationCount:
      return "permutations";
    case BtsFallback::TokenCount:
      return "tokens";
    case BtsFallback::Never:
      return "never";
  }
  return "?";
}

}  // namespace

// _____________________________________________________________________________
void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (classifiers.empty()) fail("no classifiers configured");
  if (!(trainFraction > 0 && trainFraction < 1)) {
    fail("train fraction must be in (0, 1)");
  }
  if (repetitions < 1) fail("repetitions must be >= 1");
  if (grids.label.empty() || grids.distance.empty()) {
    fail("threshold grids must not be empty");
  }
  for (double t : grids.label) {
    if (!validLabelThreshold(t)) {
      fail("label threshold " + formatDouble(t) + " not in (0, 1)");
    }
  }
  for (double t : grids.distance) {
    if (!validDistance(t)) {
      fail("distance threshold " + formatDouble(t) + " must be > 0");
    }
  }
  std::set<std::string> names;
  for (const auto& c : classifiers) {
    if (!names.insert(c.name()).second) {
      fail("classifier " + c.name() + " listed twice");
    }
    bool distanceFirst =
        c.kind == ClassifierKind::Combo || c.kind == ClassifierKind::Peq ||
        (c.kind == ClassifierKind::Measure && c.measure == Measure::Position);
    if (c.threshold && distanceFirst && !validDistance(*c.threshold)) {
      fail("classifier " + c.toString() + ": distance must be > 0");
    }
    if (c.threshold && !distanceFirst && !validLabelThreshold(*c.threshold)) {
      fail("classifier " + c.toString() + ": threshold not in (0, 1)");
    }
    if (c.threshold2 && !validLabelThreshold(*c.threshold2)) {
      fail("classifier " + c.toString() + ": threshold not in (0, 1)");
    }
  }
  if (topK < 1) fail("vocabulary size must be >= 1");
  if (!(peqEpsilon > 0)) fail("PEQ epsilon must be > 0");
  try {
    forest.validate();
    grid.validate();
    if (spicing) spicing->validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

// _____________________________________________________________________________
json ExperimentConfig::toJson() const {
  json j;
  std::vector<std::string> cls;
  for (const auto& c : classifiers) cls.push_back(c.toString());
  j["classifiers"] = cls;
  j["train_fraction"] = trainFraction;
  j["repetitions"] = repetitions;
  j["seed"] = seed;
  j["grids"] = {{"label", grids.label}, {"distance", grids.distance}};
  if (normalizer) {
    json rules = json::array();
    for (const auto& r : normalizer->rules()) {
      rules.push_back({r.pattern, r.replacement});
    }
    j["normalization"] = rules;
  } else {
    j["normalization"] = nullptr;
  }
  if (spicing) {
    j["spicing"] = {{"p", spicing->p},
                    {"n_fakes", spicing->nFakes},
                    {"fake_radius", spicing->fakeRadius},
                    {"noise_sigma", spicing->noiseSigma},
                    {"search_radius", spicing->searchRadius},
                    {"seed", spicing->seed}};
  } else {
    j["spicing"] = nullptr;
  }
  j["forest"] = {
      {"n_trees", forest.numTrees},
      {"max_features",
       forest.maxFeatures ? json(*forest.maxFeatures) : json(nullptr)},
      {"min_samples_split", forest.minSamplesSplit},
      {"max_depth", forest.maxDepth ? json(*forest.maxDepth) : json(nullptr)},
      {"bootstrap", forest.bootstrap},
      {"seed", forest.seed}};
  j["top_k"] = topK;
  j["grid"] = {{"base_resolution", grid.baseResolution},
               {"num_grids", grid.numGrids}};
  j["bts"] = {{"fallback", btsFallbackName(bts.fallback)},
              {"limit", bts.limit}};
  j["peq_epsilon"] = peqEpsilon;
  return j;
}

// _____________________________________________________________________________
std::uint64_t repetitionSeed(std::uint64_t seed, int repetition) {
  return Rng(seed).substream(static_cast<std::uint64_t>(repetition)).next();
}

// _____________________________________________________________________________
std::size_t argmaxF1(const std::vector<SweepPoint>& points) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].mean.f1 > points[best].mean.f1) best = i;
  }
  return best;
}

namespace {

// Labels as the classifiers see them (normalized if configured), cached per
// distinct raw label.
class LabelCache {
 public:
  explicit LabelCache(const Normalizer* norm) : _norm(norm) {}

  const std::string& operator()(const std::string& raw) {
    if (!_norm) return raw;
    auto it = _cache.find(raw);
    if (it == _cache.end()) it = _cache.emplace(raw, (*_norm)(raw)).first;
    return it->second;
  }

 private:
  const Normalizer* _norm;
  std::unordered_map<std::string, std::string> _cache;
};

struct PreparedPairs {
  std::vector<const std::string*> a, b;
  std::vector<LatLng> posA, posB;
  std::vector<PairClass> truth;

  std::size_t size() const { return truth.size(); }
  PairView view(std::size_t i) const {
    return {*a[i], posA[i], *b[i], posB[i]};
  }
};

struct PreparedSplit {
  PreparedPairs train, test;
  std::vector<std::string> corpus;  // distinct train identifiers' labels
  std::vector<double> testDistance;
};

PreparedPairs preparePairs(const std::vector<StationPair>& pairs,
                           LabelCache& labels) {
  PreparedPairs p;
  for (const auto& x : pairs) {
    p.a.push_back(&labels(x.a.label()));
    p.b.push_back(&labels(x.b.label()));
    p.posA.push_back(x.a.pos());
    p.posB.push_back(x.b.pos());
    p.truth.push_back(x.cls);
  }
  return p;
}

std::vector<PreparedSplit> prepare(const std::vector<Split>& splits,
                                   LabelCache& labels, unsigned threads) {
  std::vector<PreparedSplit> ret;
  for (const auto& s : splits) {
    PreparedSplit p;
    p.train = preparePairs(s.train, labels);
    p.test = preparePairs(s.test, labels);
    for (const auto& l : corpusLabels(s.train)) p.corpus.push_back(labels(l));
    p.testDistance.resize(p.test.size());
    parallelFor(p.test.size(), threads, [&](std::size_t i) {
      p.testDistance[i] = geoDistance(p.test.posA[i], p.test.posB[i]);
    });
    ret.push_back(std::move(p));
  }
  return ret;
}

std::vector<double> thresholdsFor(const std::optional<double>& fixed,
                                  const std::vector<double>& grid) {
  if (fixed) return {*fixed};
  std::vector<double> g = grid;
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<double> labelScores(Measure m, const PreparedSplit& s,
                                const ExperimentConfig& cfg) {
  TfidfModel tfidf;
  MeasureContext ctx;
  ctx.bts = cfg.bts;
  if (m == Measure::Tfidf) {
    if (s.corpus.empty())
      throw ConfigError("TFIDF needs a non-empty train set");
    tfidf = TfidfModel::train(s.corpus);
    ctx.tfidf = &tfidf;
  }
  std::vector<double> ret(s.test.size());
  parallelFor(ret.size(), cfg.threads, [&](std::size_t i) {
    ret[i] = labelScore(m, *s.test.a[i], *s.test.b[i], ctx);
  });
  return ret;
}

// Decisions as made by classifyMeasure / VotingClassifier (soft), evaluated
// from precomputed raw scores.
inline bool positionDecision(double meters, double t) {
  return positionSimilarity(meters, t) > 0.5;
}
inline bool labelDecision(double score, double t) {
  return rescale(score, t) > 0.5;
}
inline bool comboDecision(double meters, double t, double score, double t2) {
  double sum = positionSimilarity(meters, t) + rescale(score, t2);
  return sum > 0.5 * 2;
}

std::vector<PairClass> forestPredictions(const PreparedSplit& s,
                                         const ExperimentConfig& cfg,
                                         std::uint64_t seed) {
  if (s.train.size() == 0) throw ConfigError("RF needs a non-empty train set");
  FeatureExtractor fx(TrigramVocabulary::build(s.corpus, cfg.topK), cfg.grid);
  FeatureMatrix x(s.train.size(), fx.numFeatures());
  parallelFor(s.train.size(), cfg.threads, [&](std::size_t i) {
    x.setRow(i, fx.extract(s.train.view(i)).flatten());
  });
  std::vector<std::uint8_t> y;
  for (auto c : s.train.truth) y.push_back(static_cast<std::uint8_t>(toInt(c)));
  ForestParams params = cfg.forest;
  params.seed = seed;
  auto forest = trainForest(x, y, params, cfg.threads);

  std::vector<PairClass> ret(s.test.size());
  parallelFor(ret.size(), cfg.threads, [&](std::size_t i) {
    ret[i] = forest.predict(fx.extract(s.test.view(i)).flatten());
  });
  return ret;
}

ClassifierResult evaluatePrepared(const ClassifierSpec& spec,
                                  const std::vector<PreparedSplit>& splits,
                                  const ExperimentConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  ClassifierResult res;
  res.spec = spec;

  // grid points in ascending (t, t2) order
  std::vector<std::pair<double, std::optional<double>>> grid;
  switch (spec.kind) {
    case ClassifierKind::Measure:
      for (double t : thresholdsFor(spec.threshold,
                                    spec.measure == Measure::Position
                                        ? cfg.grids.distance
                                        : cfg.grids.label)) {
        grid.emplace_back(t, std::nullopt);
      }
      break;
    case ClassifierKind::Combo:
      for (double t : thresholdsFor(spec.threshold, cfg.grids.distance)) {
        for (double t2 : thresholdsFor(spec.threshold2, cfg.grids.label)) {
          grid.emplace_back(t, t2);
        }
      }
      break;
    case ClassifierKind::Peq:
      grid.emplace_back(spec.threshold.value_or(cfg.peqEpsilon), std::nullopt);
      break;
    case ClassifierKind::Forest:
    case ClassifierKind::Leq:
      grid.emplace_back(0, std::nullopt);
      break;
  }
  std::vector<std::vector<Confusion>> conf(
      grid.size(), std::vector<Confusion>(splits.size()));

  for (std::size_t r = 0; r < splits.size(); ++r) {
    const auto& s = splits[r];
    const auto& truth = s.test.truth;
    const auto& dist = s.testDistance;
    const std::size_t n = s.test.size();

    if (spec.kind == ClassifierKind::Forest) {
      auto pred = forestPredictions(
          s, cfg, cfg.forest.seed + static_cast<std::uint64_t>(r));
      for (std::size_t i = 0; i < n; ++i) conf[0][r].add(truth[i], pred[i]);
      continue;
    }
    if (spec.kind == ClassifierKind::Leq) {
      for (std::size_t i = 0; i < n; ++i) {
        conf[0][r].add(truth[i],
                       pairClassFromBool(*s.test.a[i] == *s.test.b[i]));
      }
      continue;
    }
    if (spec.kind == ClassifierKind::Peq) {
      for (std::size_t i = 0; i < n; ++i) {
        conf[0][r].add(truth[i], pairClassFromBool(dist[i] < grid[0].first));
      }
      continue;
    }

    std::vector<double> scores;
    if (spec.measure != Measure::Position) {
      scores = labelScores(spec.measure, s, cfg);
    }
    parallelFor(grid.size(), cfg.threads, [&](std::size_t g) {
      auto [t, t2] = grid[g];
      Confusion& c = conf[g][r];
      for (std::size_t i = 0; i < n; ++i) {
        bool similar;
        if (spec.kind == ClassifierKind::Combo) {
          similar = comboDecision(dist[i], t, scores[i], *t2);
        } else if (spec.measure == Measure::Position) {
          similar = positionDecision(dist[i], t);
        } else {
          similar = labelDecision(scores[i], t);
        }
        c.add(truth[i], pairClassFromBool(similar));
      }
    });
  }

  for (std::size_t g = 0; g < grid.size(); ++g) {
    SweepPoint p;
    p.t = grid[g].first;
    p.t2 = grid[g].second;
    for (const auto& c : conf[g]) p.perRepetition.push_back(metrics(c));
    p.mean = meanMetrics(p.perRepetition);
    res.points.push_back(std::move(p));
  }
  res.best = argmaxF1(res.points);
  res.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return res;
}

}  // namespace

// _____________________________________________________________________________
ClassifierResult evaluateClassifier(const ClassifierSpec& spec,
                                    const std::vector<Split>& splits,
                                    const ExperimentConfig& cfg) {
  if (splits.empty()) throw std::invalid_argument("no splits to evaluate");
  LabelCache labels(cfg.normalizer.get());
  auto prepared = prepare(splits, labels, cfg.threads);
  return evaluatePrepared(spec, prepared, cfg);
}

// _____________________________________________________________________________
Report runExperiment(const GroundTruth& input, const ExperimentConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  cfg.validate();
  if (input.pairs().empty()) throw ConfigError("ground truth is empty");
  auto nTrain = static_cast<std::size_t>(std::floor(
      static_cast<double>(input.pairs().size()) * cfg.trainFraction));
  for (const auto& c : cfg.classifiers) {
    if (needsTraining(c) && nTrain == 0) {
      throw ConfigError("classifier " + c.name() +
                        " needs training data, but the train split is empty");
    }
  }

  Report rep;
  rep.config = cfg;
  GroundTruth spiced;
  const GroundTruth* gt = &input;
  if (cfg.spicing) {
    spiced = spice(input, *cfg.spicing);
    gt = &spiced;
  }
  rep.numPairs = gt->pairs().size();
  rep.numSimilar = gt->numSimilar();

  std::vector<Split> splits;
  for (int r = 0; r < cfg.repetitions; ++r) {
    splits.push_back(
        split(*gt, cfg.trainFraction, repetitionSeed(cfg.seed, r)));
    rep.trainSizes.push_back(splits.back().train.size());
    rep.testSizes.push_back(splits.back().test.size());
  }
  LabelCache labels(cfg.normalizer.get());
  auto prepared = prepare(splits, labels, cfg.threads);
  for (const auto& c : cfg.classifiers) {
    rep.results.push_back(evaluatePrepared(c, prepared, cfg));
  }
  rep.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rep;
}

namespace {

json metricsJson(const Metrics& m) {
  json j = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  if (!m.precisionDefined) j["precision_undefined"] = true;
  if (!m.recallDefined) j["recall_undefined"] = true;
  if (!m.f1Defined) j["f1_undefined"] = true;
  return j;
}

bool hasThreshold(const ClassifierSpec& s) {
  return s.kind != ClassifierKind::Forest && s.kind != ClassifierKind::Leq;
}

bool distanceFirst(const ClassifierSpec& s) {
  return s.kind == ClassifierKind::Combo || s.kind == ClassifierKind::Peq ||
         (s.kind == ClassifierKind::Measure && s.measure == Measure::Position);
}

std::string thresholdText(const ClassifierResult& r) {
  if (!hasThreshold(r.spec)) return "---";
  const auto& p = r.bestPoint();
  std::string s = formatDouble(p.t);
  if (distanceFirst(r.spec)) s += " m";
  if (p.t2) s += " + " + formatDouble(*p.t2);
  return s;
}

}  // namespace

// _____________________________________________________________________________
json reportJson(const Report& r) {
  json body;
  body["config"] = r.config.toJson();
  body["dataset"] = {{"pairs", r.numPairs},
                     {"similar", r.numSimilar},
                     {"not_similar", r.numPairs - r.numSimilar}};
  json reps = json::array();
  for (std::size_t i = 0; i < r.trainSizes.size(); ++i) {
    reps.push_back({{"train", r.trainSizes[i]}, {"test", r.testSizes[i]}});
  }
  body["repetitions"] = reps;

  json cls = json::array();
  json timing = {{"total_seconds", r.seconds}};
  for (const auto& res : r.results) {
    json c;
    c["name"] = res.spec.name();
    c["spec"] = res.spec.toString();
    const auto& best = res.bestPoint();
    json b = metricsJson(best.mean);
    if (hasThreshold(res.spec)) b["t"] = best.t;
    if (best.t2) b["t2"] = *best.t2;
    json per = json::array();
    for (const auto& m : best.perRepetition) per.push_back(metricsJson(m));
    b["per_repetition"] = per;
    c["best"] = b;
    if (res.swept()) {
      json sw = json::array();
      for (const auto& p : res.points) {
        json row = metricsJson(p.mean);
        row["t"] = p.t;
        if (p.t2) row["t2"] = *p.t2;
        sw.push_back(row);
      }
      c["sweep"] = sw;
    }
    cls.push_back(c);
    timing["classifiers"][res.spec.name()] = res.seconds;
  }
  body["classifiers"] = cls;
  return {{"body", body}, {"timing", timing}};
}

// _____________________________________________________________________________
std::string reportText(const Report& r) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line,
                "%zu pairs (%zu similar), %d repetition(s), train fraction "
                "%g\n\n",
                r.numPairs, r.numSimilar, r.config.repetitions,
                r.config.trainFraction);
  out << line;
  std::snprintf(line, sizeof line, "%-10s %-16s %7s %7s %7s\n", "method", "t",
                "prec.", "rec.", "F1");
  out << line;
  for (const auto& res : r.results) {
    const auto& m = res.bestPoint().mean;
    std::snprintf(line, sizeof line, "%-10s %-16s %7.4f %7.4f %7.4f\n",
                  res.spec.name().c_str(), thresholdText(res).c_str(),
                  m.precision, m.recall, m.f1);
    out << line;
  }
  std::snprintf(line, sizeof line, "\ntotal time %.1f s\n", r.seconds);
  out << line;
  return out.str();
}

// _____________________________________________________________________________
void writeSweepCsv(std::ostream& out, const ClassifierResult& r) {
  bool combo = r.spec.kind == ClassifierKind::Combo;
  out << (combo ? "t,t2,precision,recall,f1\n" : "t,precision,recall,f1\n");
  for (const auto& p : r.points) {
    out << formatDouble(p.t) << ',';
    if (combo) out << formatDouble(p.t2.value_or(0)) << ',';
    out << formatDouble(p.mean.precision) << ','
        << formatDouble(p.mean.recall) << ',' << formatDouble(p.mean.f1)
        << '\n';
  }
}

}  // namespace stationmatch
