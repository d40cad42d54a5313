import os

import pytest

import stationmatch as sm

FIXTURES = os.environ.get(
    "STATIONMATCH_FIXTURES",
    os.path.join(os.path.dirname(__file__), "..", "fixtures"))
OSM = os.path.join(FIXTURES, "stations.osm")


@pytest.fixture(scope="module")
def gt():
    return sm.build_ground_truth(OSM)


def test_similarity_measures():
    assert sm.edit_distance("kitten", "sitting") == 3
    assert sm.ed_similarity("abc", "abc") == 1.0
    assert 0.0 <= sm.jaro_winkler("Hauptbahnhof", "Hbf") <= 1.0
    assert sm.jaccard("St. Pancras", "St Pancras") == 1.0
    assert sm.bts("Freiburg Hauptbahnhof", "Hauptbahnhof Freiburg") == 1.0
    assert sm.rescale(0.9, 0.8) == 0.75
    assert sm.tokenize("St. Pancras") == ["St", "Pancras"]


def test_geometry():
    d = sm.geo_distance(47.99, 7.84, 47.99, 7.85)
    assert 700 < d < 800
    assert sm.position_similarity(0.0, 100.0) == 1.0
    assert sm.position_similarity(100.0, 100.0) == 0.5
    assert sm.grid_cells(0.0, 0.0)[0] == (128, 128)
    assert len(sm.grid_cells(0.0, 0.0, num_grids=3)) == 3


def test_ground_truth(gt, tmp_path):
    assert len(gt) == 101
    assert gt.num_similar() == 36
    assert len(gt.stations) == 43
    path = str(tmp_path / "gt.tsv")
    sm.write_ground_truth(path, gt)
    again = sm.read_ground_truth(path)
    assert len(again) == len(gt)
    spiced = sm.spice(gt, p=1.0, seed=1)
    kinds = {p.provenance for p in spiced.pairs}
    assert kinds == {"orig", "sneg", "snoise"}


def test_errors(tmp_path):
    with pytest.raises(sm.IoError):
        sm.read_ground_truth(str(tmp_path / "missing.tsv"))
    bad = tmp_path / "bad.osm"
    bad.write_text("<osm><node")
    with pytest.raises(sm.ParseError):
        sm.build_ground_truth(str(bad))
    with pytest.raises(ValueError):
        sm.StationIdentifier("", 0.0, 0.0)


def test_normalizer():
    n = sm.Normalizer([("hbf", "hauptbahnhof")])
    assert n("Freiburg  Hbf") == "freiburg hauptbahnhof"


def test_forest_round_trip(gt, tmp_path):
    model = sm.RandomForestModel.train(gt, n_trees=10, seed=3)
    assert model.columns[:2] == ["d_m", "d_3g"]
    a = sm.StationIdentifier("Hauptbahnhof", 47.99, 7.84)
    b = sm.StationIdentifier("Freiburg Hbf", 47.99027, 7.84)
    path = str(tmp_path / "model.json")
    model.save(path)
    loaded = sm.RandomForestModel.load(path)
    p, q = model.classify(a, b), loaded.classify(a, b)
    assert p.cls == q.cls
    assert p.probability == q.probability


def test_run_experiment(gt):
    rep = sm.run_experiment(gt, ["P", "ED:0.9", "RF"], train_fraction=0.5,
                            repetitions=2, n_trees=10, seed=1)
    names = [c["name"] for c in rep["body"]["classifiers"]]
    assert names == ["P", "ED", "RF"]
    assert 0.0 <= rep["body"]["classifiers"][2]["best"]["f1"] <= 1.0
    again = sm.run_experiment(gt, ["P", "ED:0.9", "RF"], train_fraction=0.5,
                              repetitions=2, n_trees=10, seed=1)
    assert rep["body"] == again["body"]
