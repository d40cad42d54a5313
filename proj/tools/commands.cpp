#include "commands.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "stationmatch/error.h"
#include "stationmatch/evaluation.h"
#include "stationmatch/features.h"
#include "stationmatch/forest.h"
#include "stationmatch/normalize.h"
#include "stationmatch/osm.h"
#include "stationmatch/parallel.h"
#include "stationmatch/station.h"

namespace stationmatch::cli {

namespace fs = std::filesystem;

namespace {

// Bad flag values or combinations detected after CLI11 parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

void requireFile(const std::string& path, const char* what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IoError(std::string(what) + " '" + path + "' does not exist");
  }
}

// Writes via a temporary file in the target directory and renames it into
// place, so a failed command never leaves a partial output file.
template <typename Fn>
void writeAtomically(const std::string& path, Fn&& write) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
      write(out);
      out.flush();
      if (!out) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot create '" + path + "': " + ec.message());
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

struct GlobalOptions {
  unsigned threads = 0;
};

struct SpiceOptions {
  std::optional<double> p;
  int fakes = 5;
  double fakeRadius = 100;
  double sigma = 100;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--spice", p,
                    "spice with probability p (fake negatives and noise)");
    cmd->add_option("--spice-fakes", fakes, "fake negatives per anchor")
        ->capture_default_str();
    cmd->add_option("--spice-fake-radius", fakeRadius,
                    "fake negatives are placed within this many meters")
        ->capture_default_str();
    cmd->add_option("--spice-sigma", sigma, "coordinate noise sigma, meters")
        ->capture_default_str();
    cmd->add_option("--spice-seed", seed, "spicing seed")
        ->capture_default_str();
  }

  std::optional<SpicingConfig> config(double searchRadius) const {
    if (!p) return std::nullopt;
    SpicingConfig c;
    c.p = *p;
    c.nFakes = fakes;
    c.fakeRadius = fakeRadius;
    c.noiseSigma = sigma;
    c.searchRadius = searchRadius;
    c.seed = seed;
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

struct FeatureOptions {
  std::size_t topK = 2500;
  int baseResolution = 256;
  int numGrids = 2;

  void add(CLI::App* cmd) {
    cmd->add_option("--top-k", topK, "trigram vocabulary size")
        ->capture_default_str();
    cmd->add_option("--base-resolution", baseResolution,
                    "cells per axis of the base grid")
        ->capture_default_str();
    cmd->add_option("--grids", numGrids, "number of interwoven grids")
        ->capture_default_str();
  }

  GridSpec grid() const {
    GridSpec g{baseResolution, numGrids};
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (topK < 1) throw UsageError("--top-k must be >= 1");
    return g;
  }
};

struct ForestOptions {
  int trees = 100;
  std::optional<int> maxFeatures;
  std::optional<int> maxDepth;
  int minSamplesSplit = 2;
  bool noBootstrap = false;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd) {
    cmd->add_option("--trees", trees, "number of trees")->capture_default_str();
    cmd->add_option("--max-features", maxFeatures,
                    "features tried per split (default: floor(sqrt(d)))");
    cmd->add_option("--max-depth", maxDepth, "maximum tree depth");
    cmd->add_option("--min-samples-split", minSamplesSplit,
                    "minimum samples to split a node")
        ->capture_default_str();
    cmd->add_flag("--no-bootstrap", noBootstrap,
                  "train every tree on all rows");
    cmd->add_option("--forest-seed", seed, "forest seed")
        ->capture_default_str();
  }

  ForestParams params() const {
    ForestParams p;
    p.numTrees = trees;
    p.maxFeatures = maxFeatures;
    p.maxDepth = maxDepth;
    p.minSamplesSplit = minSamplesSplit;
    p.bootstrap = !noBootstrap;
    p.seed = seed;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

struct ExperimentOptions {
  std::string gt;
  double trainFraction = 0.2;
  int repetitions = 5;
  std::uint64_t seed = 0;
  bool normalize = false;
  std::string rules;
  std::vector<double> labelGrid, distanceGrid;
  std::string btsFallback = "permutations";
  std::size_t btsLimit = 6;
  double peqEpsilon = 1;
  double radius = 1000;
  SpiceOptions spice;
  FeatureOptions features;
  ForestOptions forest;

  void add(CLI::App* cmd) {
    cmd->add_option("--gt", gt, "ground-truth TSV")->required();
    cmd->add_option("--train-fraction", trainFraction,
                    "share of pairs used for training")
        ->capture_default_str();
    cmd->add_option("--repetitions", repetitions, "number of random splits")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "split seed")->capture_default_str();
    cmd->add_flag("--normalize", normalize,
                  "normalize labels with --rules before scoring");
    cmd->add_option("--rules", rules, "normalization rules TSV");
    cmd->add_option("--label-grid", labelGrid,
                    "label thresholds to sweep (default 0.05..0.95, 0.99)")
        ->delimiter(',');
    cmd->add_option("--distance-grid", distanceGrid,
                    "distance thresholds to sweep, meters")
        ->delimiter(',');
    cmd->add_option("--bts-fallback", btsFallback,
                    "when BTS falls back to jaccard")
        ->check(CLI::IsMember({"permutations", "tokens", "never"}))
        ->capture_default_str();
    cmd->add_option("--bts-limit", btsLimit, "BTS fallback limit")
        ->capture_default_str();
    cmd->add_option("--peq-epsilon", peqEpsilon, "PEQ distance, meters")
        ->capture_default_str();
    cmd->add_option("--radius", radius,
                    "search radius the ground truth was built with")
        ->capture_default_str();
    spice.add(cmd);
    features.add(cmd);
    forest.add(cmd);
  }

  ExperimentConfig config(std::vector<ClassifierSpec> classifiers,
                          unsigned threads) const {
    ExperimentConfig c;
    c.classifiers = std::move(classifiers);
    c.trainFraction = trainFraction;
    c.repetitions = repetitions;
    c.seed = seed;
    if (!labelGrid.empty()) c.grids.label = labelGrid;
    if (!distanceGrid.empty()) c.grids.distance = distanceGrid;
    if (normalize && rules.empty()) {
      throw UsageError("--normalize needs a --rules file");
    }
    if (!rules.empty() && !normalize) {
      throw UsageError("--rules given without --normalize");
    }
    if (normalize) {
      requireFile(rules, "rules file");
      c.normalizer =
          std::make_shared<const Normalizer>(Normalizer::fromFile(rules));
    }
    c.spicing = spice.config(radius);
    c.forest = forest.params();
    c.grid = features.grid();
    c.topK = features.topK;
    c.bts.fallback = btsFallback == "tokens" ? BtsFallback::TokenCount
                     : btsFallback == "never" ? BtsFallback::Never
                                              : BtsFallback::PermutationCount;
    c.bts.limit = btsLimit;
    c.peqEpsilon = peqEpsilon;
    c.threads = threads;
    c.validate();
    return c;
  }
};

std::vector<ClassifierSpec> parseClassifiers(
    const std::vector<std::string>& names) {
  std::vector<ClassifierSpec> ret;
  for (const auto& n : names) {
    try {
      ret.push_back(ClassifierSpec::parse(n));
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }
  return ret;
}

std::string fileSafe(std::string name) {
  for (auto& c : name) {
    if (c == '+') c = '_';
  }
  return name;
}

// _____________________________________________________________________________
int cmdBuildGt(const std::string& osmPath, const std::string& outPath,
               const PairConfig& pairs, const std::string& tags,
               const SpiceOptions& spiceOpts, std::ostream& out) {
  requireFile(osmPath, "OSM file");
  StationFilter filter;
  if (!tags.empty()) filter = StationFilter::parse(tags);
  auto spicing = spiceOpts.config(pairs.radius);

  OsmData osm = parseOsmFile(osmPath, filter);
  GroundTruth gt = buildPairs(osm, pairs);
  DatasetStats stats = datasetStats(osm, gt);
  if (spicing) gt = spice(gt, *spicing);

  writeAtomically(outPath,
                  [&](std::ostream& o) { writeGroundTruthTsv(o, gt); });
  out << formatStats(stats);
  if (spicing) {
    out << "spiced pairs\t" << gt.pairs().size() << " (" << gt.numSimilar()
        << " similar)\n";
  }
  return kExitOk;
}

// _____________________________________________________________________________
int cmdEvaluate(const ExperimentOptions& opts,
                const std::vector<std::string>& classifiers,
                const std::string& reportDir, unsigned threads,
                std::ostream& out) {
  auto specs = classifiers.empty() ? defaultClassifiers()
                                   : parseClassifiers(classifiers);
  requireFile(opts.gt, "ground-truth file");
  auto cfg = opts.config(std::move(specs), threads);
  GroundTruth gt = readGroundTruthTsv(opts.gt);
  Report rep = runExperiment(gt, cfg);
  std::string text = reportText(rep);

  if (!reportDir.empty()) {
    std::error_code ec;
    fs::create_directories(reportDir, ec);
    if (ec) throw IoError("cannot create report directory '" + reportDir + "'");
    fs::path dir(reportDir);
    writeAtomically((dir / "report.txt").string(),
                    [&](std::ostream& o) { o << text; });
    writeAtomically((dir / "report.json").string(), [&](std::ostream& o) {
      o << reportJson(rep).dump(2) << '\n';
    });
    for (const auto& r : rep.results) {
      if (!r.swept()) continue;
      auto name = "sweep_" + fileSafe(r.spec.name()) + ".csv";
      writeAtomically((dir / name).string(),
                      [&](std::ostream& o) { writeSweepCsv(o, r); });
    }
  }
  out << text;
  return kExitOk;
}

// _____________________________________________________________________________
int cmdSweep(const ExperimentOptions& opts, const std::string& classifier,
             const std::string& outPath, unsigned threads, std::ostream& out,
             std::ostream& err) {
  auto specs = parseClassifiers({classifier});
  requireFile(opts.gt, "ground-truth file");
  auto cfg = opts.config(std::move(specs), threads);
  GroundTruth gt = readGroundTruthTsv(opts.gt);
  Report rep = runExperiment(gt, cfg);
  const auto& r = rep.results.front();
  if (outPath.empty()) {
    writeSweepCsv(out, r);
  } else {
    writeAtomically(outPath, [&](std::ostream& o) { writeSweepCsv(o, r); });
  }
  const auto& b = r.bestPoint();
  err << "best " << r.spec.name() << " t=" << formatDouble(b.t);
  if (b.t2) err << " t2=" << formatDouble(*b.t2);
  err << " F1=" << formatDouble(b.mean.f1) << '\n';
  return kExitOk;
}

// _____________________________________________________________________________
int cmdTrain(const std::string& gtPath, const std::string& modelPath,
             const FeatureOptions& features, const ForestOptions& forest,
             unsigned threads, std::ostream& out) {
  requireFile(gtPath, "ground-truth file");
  auto grid = features.grid();
  auto params = forest.params();
  GroundTruth gt = readGroundTruthTsv(gtPath);
  if (gt.pairs().empty()) throw FormatError("ground truth has no pairs");
  auto model = trainPairModel(gt.pairs(), features.topK, grid, params, threads);

  std::size_t correct = 0;
  for (const auto& p : gt.pairs()) {
    if (model.predict(model.extractor().extract(p)).cls == p.cls) ++correct;
  }
  writeAtomically(modelPath, [&](std::ostream& o) { model.save(o); });
  char buf[128];
  std::snprintf(buf, sizeof buf, "trained %d trees on %zu pairs, %zu features\n"
                "train accuracy %.4f\n",
                params.numTrees, gt.pairs().size(),
                model.schema().columns.size(),
                static_cast<double>(correct) / gt.pairs().size());
  out << buf;
  return kExitOk;
}

// _____________________________________________________________________________
int cmdClassify(const std::string& modelPath, const std::string& pairsPath,
                const std::string& outPath, std::ostream& out,
                std::ostream& err) {
  requireFile(modelPath, "model file");
  auto model = RandomForestModel::loadFile(modelPath);
  auto fx = model.extractor();

  std::ifstream fileIn;
  std::istream* in = &std::cin;
  if (!pairsPath.empty() && pairsPath != "-") {
    requireFile(pairsPath, "pairs file");
    fileIn.open(pairsPath, std::ios::binary);
    if (!fileIn) throw IoError("cannot open '" + pairsPath + "'");
    in = &fileIn;
  }
  auto process = [&](std::ostream& o) {
    std::string line;
    std::size_t errors = 0;
    while (std::getline(*in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        auto fields = splitTabs(line);
        if (fields.size() < 6) throw ParseError("expected 6 columns");
        auto a = parseIdentifierColumns(fields, 0);
        auto b = parseIdentifierColumns(fields, 3);
        auto pred = model.classify(a, b);
        o << line << '\t' << toInt(pred.cls) << '\t'
          << formatDouble(pred.probability) << '\n';
      } catch (const std::exception& e) {
        ++errors;
        std::string msg = e.what();
        for (auto& c : msg) {
          if (c == '\t' || c == '\n') c = ' ';
        }
        o << line << "\tERROR\t" << msg << '\n';
      }
    }
    if (in->bad()) throw IoError("read error on pairs input");
    if (errors) err << errors << " malformed row(s)\n";
  };
  if (outPath.empty() || outPath == "-") {
    process(out);
  } else {
    writeAtomically(outPath, process);
  }
  return kExitOk;
}

// _____________________________________________________________________________
int cmdExportFeatures(const std::string& gtPath, const std::string& outPath,
                      const FeatureOptions& features, std::ostream& out) {
  requireFile(gtPath, "ground-truth file");
  auto grid = features.grid();
  GroundTruth gt = readGroundTruthTsv(gtPath);
  if (gt.pairs().empty()) throw FormatError("ground truth has no pairs");
  FeatureExtractor fx(
      TrigramVocabulary::build(corpusLabels(gt.pairs()), features.topK), grid);
  if (outPath.empty() || outPath == "-") {
    writeFeatureMatrixTsv(out, fx, gt.pairs());
  } else {
    writeAtomically(outPath, [&](std::ostream& o) {
      writeFeatureMatrixTsv(o, fx, gt.pairs());
    });
  }
  return kExitOk;
}

}  // namespace

// _____________________________________________________________________________
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Station identifier similarity classification"};
  app.name(args.empty() ? "stationmatch" : args[0]);
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--threads", global.threads,
                 "worker threads (0: all cores)")
      ->envname("STATIONMATCH_THREADS")
      ->capture_default_str();

  // build-gt
  auto* buildGt = app.add_subcommand("build-gt", "OSM XML -> ground-truth TSV");
  std::string osmPath, gtOut, stationTags;
  PairConfig pairCfg;
  SpiceOptions buildSpice;
  buildGt->add_option("--osm", osmPath, "OSM XML input")->required();
  buildGt->add_option("--out", gtOut, "ground-truth TSV output")->required();
  buildGt->add_option("--radius", pairCfg.radius, "search radius, meters")
      ->capture_default_str();
  buildGt->add_option("--same-name-radius", pairCfg.sameNameRadius,
                      "skip equal labels of different stop_areas closer "
                      "than this")
      ->capture_default_str();
  buildGt->add_option("--station-tags", stationTags,
                      "comma-separated key=value tags marking station nodes");
  buildSpice.add(buildGt);

  // evaluate
  auto* evaluate =
      app.add_subcommand("evaluate", "run the evaluation protocol");
  ExperimentOptions evalOpts;
  std::vector<std::string> evalClassifiers;
  std::string reportDir;
  evalOpts.add(evaluate);
  evaluate
      ->add_option("--classifiers", evalClassifiers,
                   "classifiers, e.g. P,ED:0.85,P+TFIDF,RF (default: all)")
      ->delimiter(',');
  evaluate->add_option("--report-dir", reportDir,
                       "write report.txt, report.json and sweep CSVs here");

  // sweep
  auto* sweepCmd = app.add_subcommand("sweep", "threshold sweep as CSV");
  ExperimentOptions sweepOpts;
  std::string sweepClassifier, sweepOut;
  sweepOpts.add(sweepCmd);
  sweepCmd->add_option("--classifier", sweepClassifier, "e.g. P, ED, P+ED")
      ->required();
  sweepCmd->add_option("--out", sweepOut, "CSV output (default: stdout)");

  // train
  auto* train = app.add_subcommand("train", "train a random forest model");
  std::string trainGt, modelOut;
  FeatureOptions trainFeatures;
  ForestOptions trainForestOpts;
  train->add_option("--gt", trainGt, "ground-truth TSV")->required();
  train->add_option("--model", modelOut, "model output file")->required();
  trainFeatures.add(train);
  trainForestOpts.add(train);
  // --seed is the natural spelling here
  train->add_option("--seed", trainForestOpts.seed, "forest seed");

  // classify
  auto* classify =
      app.add_subcommand("classify", "classify pairs with a model");
  std::string modelIn, pairsIn, classifyOut;
  classify->add_option("--model", modelIn, "model file")->required();
  classify->add_option("--pairs", pairsIn,
                       "TSV label_a lat_a lon_a label_b lat_b lon_b "
                       "(default: stdin)");
  classify->add_option("--out", classifyOut, "output (default: stdout)");

  // export-features
  auto* exportCmd =
      app.add_subcommand("export-features", "write the feature matrix TSV");
  std::string exportGt, exportOut;
  FeatureOptions exportFeatures;
  exportCmd->add_option("--gt", exportGt, "ground-truth TSV")->required();
  exportCmd->add_option("--out", exportOut, "output (default: stdout)");
  exportFeatures.add(exportCmd);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("stationmatch");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  unsigned threads = global.threads == 0 ? defaultThreads() : global.threads;
  try {
    if (*buildGt) {
      return cmdBuildGt(osmPath, gtOut, pairCfg, stationTags, buildSpice, out);
    }
    if (*evaluate) {
      return cmdEvaluate(evalOpts, evalClassifiers, reportDir, threads, out);
    }
    if (*sweepCmd) {
      return cmdSweep(sweepOpts, sweepClassifier, sweepOut, threads, out, err);
    }
    if (*train) {
      return cmdTrain(trainGt, modelOut, trainFeatures, trainForestOpts,
                      threads, out);
    }
    if (*classify) {
      return cmdClassify(modelIn, pairsIn, classifyOut, out, err);
    }
    if (*exportCmd) {
      return cmdExportFeatures(exportGt, exportOut, exportFeatures, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNoInput;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitSoftware;
  }
  return kExitUsage;
}

}  // namespace stationmatch::cli
