#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stationmatch/classifier.h"
#include "stationmatch/error.h"
#include "stationmatch/evaluation.h"
#include "stationmatch/features.h"
#include "stationmatch/forest.h"
#include "stationmatch/geo.h"
#include "stationmatch/normalize.h"
#include "stationmatch/osm.h"
#include "stationmatch/similarity.h"
#include "stationmatch/station.h"
#include "stationmatch/text.h"

namespace py = pybind11;
using namespace stationmatch;

PYBIND11_MODULE(_stationmatch, m) {
  m.doc() = "Station identifier similarity classification";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());

  py::class_<StationIdentifier>(m, "StationIdentifier")
      .def(py::init<std::string, double, double>(), py::arg("label"),
           py::arg("lat"), py::arg("lon"))
      .def_property_readonly("label", &StationIdentifier::label)
      .def_property_readonly("lat", &StationIdentifier::lat)
      .def_property_readonly("lon", &StationIdentifier::lon)
      .def(py::self == py::self)
      .def("__repr__", [](const StationIdentifier& s) {
        return "StationIdentifier('" + s.label() + "', " +
               formatDouble(s.lat()) + ", " + formatDouble(s.lon()) + ")";
      });

  py::enum_<PairClass>(m, "PairClass")
      .value("NOT_SIMILAR", PairClass::NotSimilar)
      .value("SIMILAR", PairClass::Similar);

  py::class_<StationPair>(m, "StationPair")
      .def_readonly("a", &StationPair::a)
      .def_readonly("b", &StationPair::b)
      .def_readonly("cls", &StationPair::cls)
      .def_property_readonly("provenance", [](const StationPair& p) {
        return std::string(provenanceName(p.provenance));
      });

  py::class_<GroundTruth>(m, "GroundTruth")
      .def(py::init<>())
      .def("add_pair",
           [](GroundTruth& gt, const StationIdentifier& a,
              const StationIdentifier& b, bool similar) {
             return gt.addPair({a, b, pairClassFromBool(similar)});
           })
      .def_property_readonly("pairs", &GroundTruth::pairs)
      .def_property_readonly("stations", &GroundTruth::stations)
      .def("num_similar", &GroundTruth::numSimilar)
      .def("num_not_similar", &GroundTruth::numNotSimilar)
      .def("__len__", [](const GroundTruth& gt) { return gt.pairs().size(); });

  m.def("read_ground_truth",
        py::overload_cast<const std::string&>(&readGroundTruthTsv),
        py::arg("path"));
  m.def("write_ground_truth",
        py::overload_cast<const std::string&, const GroundTruth&>(
            &writeGroundTruthTsv),
        py::arg("path"), py::arg("gt"));

  m.def("geo_distance",
        [](double lat1, double lon1, double lat2, double lon2) {
          return geoDistance({lat1, lon1}, {lat2, lon2});
        });
  m.def("position_similarity",
        py::overload_cast<double, double>(&positionSimilarity),
        py::arg("meters"), py::arg("d_hat"));
  m.def(
      "grid_cells",
      [](double lat, double lon, int baseResolution, int numGrids) {
        std::vector<std::pair<int, int>> ret;
        for (auto c : gridCells({lat, lon}, {baseResolution, numGrids})) {
          ret.emplace_back(c.x, c.y);
        }
        return ret;
      },
      py::arg("lat"), py::arg("lon"), py::arg("base_resolution") = 256,
      py::arg("num_grids") = 2);

  m.def("edit_distance",
        py::overload_cast<std::string_view, std::string_view>(&editDistance));
  m.def("ed_similarity",
        py::overload_cast<std::string_view, std::string_view>(&edSimilarity));
  m.def("ped_similarity", &pedSimilarity);
  m.def("jaro", py::overload_cast<std::string_view, std::string_view>(&jaro));
  m.def("jaro_winkler", &jaroWinkler);
  m.def("jaccard", &jaccard);
  m.def("bts",
        [](std::string_view a, std::string_view b) { return bts(a, b); });
  m.def("rescale", &rescale, py::arg("sim"), py::arg("t"));
  m.def("trigrams", [](std::string_view s) { return trigrams(s); });
  m.def("tokenize", &tokenize);

  py::class_<TfidfModel>(m, "TfidfModel")
      .def_static("train", &TfidfModel::train, py::arg("labels"))
      .def("similarity", &TfidfModel::similarity)
      .def("idf", &TfidfModel::idf)
      .def_property_readonly("num_docs", &TfidfModel::numDocs);

  py::class_<Normalizer>(m, "Normalizer")
      .def_static("from_file", &Normalizer::fromFile, py::arg("path"))
      .def(py::init([](const std::vector<std::pair<std::string, std::string>>&
                           rules) {
             std::vector<NormalizationRule> r;
             for (const auto& [p, s] : rules) r.push_back({p, s});
             return Normalizer(std::move(r));
           }),
           py::arg("rules"))
      .def("__call__", &Normalizer::operator());

  m.def(
      "build_ground_truth",
      [](const std::string& osmPath, double radius, double sameNameRadius) {
        auto osm = parseOsmFile(osmPath);
        return buildPairs(osm, {radius, sameNameRadius});
      },
      py::arg("osm_path"), py::arg("radius") = 1000.0,
      py::arg("same_name_radius") = 250.0);
  m.def(
      "spice",
      [](const GroundTruth& gt, double p, int nFakes, double fakeRadius,
         double sigma, std::uint64_t seed) {
        SpicingConfig c;
        c.p = p;
        c.nFakes = nFakes;
        c.fakeRadius = fakeRadius;
        c.noiseSigma = sigma;
        c.seed = seed;
        return spice(gt, c);
      },
      py::arg("gt"), py::arg("p") = 0.5, py::arg("n_fakes") = 5,
      py::arg("fake_radius") = 100.0, py::arg("noise_sigma") = 100.0,
      py::arg("seed") = 0);

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("cls", &Prediction::cls)
      .def_readonly("probability", &Prediction::probability);

  py::class_<RandomForestModel>(m, "RandomForestModel")
      .def_static(
          "train",
          [](const GroundTruth& gt, std::size_t topK, int numTrees,
             std::uint64_t seed, unsigned threads) {
            ForestParams p;
            p.numTrees = numTrees;
            p.seed = seed;
            py::gil_scoped_release release;
            return trainPairModel(gt.pairs(), topK, GridSpec{}, p, threads);
          },
          py::arg("gt"), py::arg("top_k") = 2500, py::arg("n_trees") = 100,
          py::arg("seed") = 0, py::arg("threads") = 0)
      .def_static("load", &RandomForestModel::loadFile, py::arg("path"))
      .def("save", &RandomForestModel::saveFile, py::arg("path"))
      .def("classify", &RandomForestModel::classify)
      .def_property_readonly("columns", [](const RandomForestModel& m) {
        return m.schema().columns;
      });

  m.def(
      "run_experiment",
      [](const GroundTruth& gt, const std::vector<std::string>& classifiers,
         double trainFraction, int repetitions, std::uint64_t seed,
         int numTrees, std::size_t topK, unsigned threads) {
        ExperimentConfig cfg;
        if (!classifiers.empty()) {
          cfg.classifiers.clear();
          for (const auto& c : classifiers) {
            cfg.classifiers.push_back(ClassifierSpec::parse(c));
          }
        }
        cfg.trainFraction = trainFraction;
        cfg.repetitions = repetitions;
        cfg.seed = seed;
        cfg.forest.numTrees = numTrees;
        cfg.topK = topK;
        cfg.threads = threads;
        Report r;
        {
          py::gil_scoped_release release;
          r = runExperiment(gt, cfg);
        }
        return reportJson(r).dump();
      },
      py::arg("gt"), py::arg("classifiers") = std::vector<std::string>{},
      py::arg("train_fraction") = 0.2, py::arg("repetitions") = 5,
      py::arg("seed") = 0, py::arg("n_trees") = 100, py::arg("top_k") = 2500,
      py::arg("threads") = 0);
}
