"""Command-line interface: exit codes, output files and determinism."""

import csv
import json
from pathlib import Path

import pytest

from hxr.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def read_report(directory, name):
    return json.loads((Path(directory) / name).read_text())


def test_example_outputs(tmp_path):
    out = tmp_path / "ex"
    assert main(["example", "--input", str(DATA / "example_params.json"), "--out", str(out)]) == 0
    rep = read_report(out, "geometry_report.json")
    assert rep["schema_version"] == 1 and rep["command"] == "example"
    assert rep["status"] == "ok" and rep["all_positive"] is True
    assert rep["min_principal_curvature"] > 0
    assert max(rep["pipeline_agreement"].values()) < 1e-6
    rows = list(csv.reader((out / "profile.csv").open()))
    assert rows[0] == ["t", "u", "u_t", "u_tt", "margin"] and len(rows) == 202
    mesh = list(csv.reader((out / "surface_mesh.csv").open()))
    n = json.loads((DATA / "example_params.json").read_text()).get("n", 2)
    expected = [f"u{i}" for i in range(1, n + 1)] + [f"x{i}" for i in range(1, n + 1)]
    assert mesh[0] == expected + ["t", "normal_t", "min_curvature"]
    assert all(len(row) == len(mesh[0]) for row in mesh)
    assert len(mesh) == 1 + 21 * 41


def test_example_outside_positive_profile(tmp_path):
    inp = write(tmp_path, "p.json", {"c1": -1, "c2": -1, "t1": 0, "t2": 2.5})
    assert main(["example", "--input", inp, "--out", str(tmp_path / "o")]) == 0
    rep = read_report(tmp_path / "o", "geometry_report.json")
    assert rep["status"] == "profile-invalid" and rep["all_positive"] is False
    assert rep["margin"]["profile_invalid"]


@pytest.mark.parametrize("params,message", [
    ({"c1": 1, "c2": -1, "t1": 0, "t2": 0.3}, "c1 must be negative"),
    ({"c1": -1, "c2": -1, "t1": 0}, "missing parameter"),
    ({"c1": -1, "c2": -1, "t1": 0, "t2": 0.3, "n": 1}, "n must be at least 2"),
])
def test_example_bad_parameters(tmp_path, capsys, params, message):
    inp = write(tmp_path, "p.json", params)
    assert main(["example", "--input", inp, "--out", str(tmp_path / "o")]) == 2
    assert message in capsys.readouterr().err


def test_missing_and_malformed_input(tmp_path, capsys):
    assert main(["classify", "--input", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["ends", "--input", str(bad), "--out", str(tmp_path)]) == 2
    assert "not valid JSON" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        main(["classify", "--out", str(tmp_path)])
    assert info.value.code == 2


@pytest.mark.parametrize("name,verdict", [
    ("sphere.json", "Sphere"),
    ("graph.json", "VerticalGraph"),
    ("example_surface.json", "SimpleEnd"),
])
def test_classify_verdicts(tmp_path, name, verdict):
    out = tmp_path / "c"
    code = main(["classify", "--input", str(DATA / name), "--config", str(DATA / "classify_config.json"),
                 "--out", str(out)])
    assert code == 0
    rep = read_report(out, "classification_report.json")
    assert rep["verdict"] == verdict and rep["status"] == "ok"
    assert (out / "event_log.csv").exists()


def test_classify_precondition_failure(tmp_path, capsys):
    out = tmp_path / "c"
    assert main(["classify", "--input", str(DATA / "vertical_plane.json"), "--out", str(out)]) == 4
    rep = read_report(out, "classification_report.json")
    assert rep["status"] == "precondition-failed" and rep["witness"] is not None
    assert "witness" in capsys.readouterr().err


def test_classify_inconclusive_exit_code(tmp_path):
    # an impossible diameter threshold leaves the end unconfirmed
    cfg = write(tmp_path, "cfg.json", {"diameter_threshold": 1e-12, "hyperplane_sample_count": 3})
    out = tmp_path / "c"
    code = main(["classify", "--input", str(DATA / "example_surface.json"), "--config", cfg, "--out", str(out)])
    assert code == 3
    assert read_report(out, "classification_report.json")["verdict"] == "Inconclusive"


def test_slice_statuses(tmp_path):
    out = tmp_path / "s"
    code = main(["slice", "--input", str(DATA / "sphere.json"), "--config", str(DATA / "slice_config.json"),
                 "--out", str(out)])
    assert code == 0
    rep = read_report(out, "slice_report.json")
    statuses = [s["status"] for s in rep["slices"]]
    assert statuses[0] == "ok" and statuses[-1] == "empty"
    first = rep["slices"][0]["components"][0]
    assert first["min_induced_eigenvalue"] > 0
    rows = list(csv.reader((out / "slice_000.csv").open()))
    assert rows[0][0] == "component" and len(rows) > 1


def test_ends(tmp_path):
    out = tmp_path / "e"
    cfg = write(tmp_path, "cfg.json", {"hyperplane_sample_count": 5})
    assert main(["ends", "--input", str(DATA / "example_surface.json"), "--config", cfg, "--out", str(out)]) == 0
    rep = read_report(out, "ends_report.json")
    assert rep["simple_end"] is True and rep["clusters"] == 1
    assert main(["ends", "--input", str(DATA / "sphere.json"), "--out", str(tmp_path / "s")]) == 0
    assert read_report(tmp_path / "s", "ends_report.json")["status"] == "compact"


def test_outputs_are_byte_identical(tmp_path):
    for run in ("a", "b"):
        main(["example", "--input", str(DATA / "example_params.json"), "--out", str(tmp_path / run / "ex")])
        main(["classify", "--input", str(DATA / "sphere.json"), "--seed", "3",
              "--out", str(tmp_path / run / "cl")])
    for sub, name in (("ex", "geometry_report.json"), ("ex", "surface_mesh.csv"), ("ex", "profile.csv"),
                      ("cl", "classification_report.json"), ("cl", "event_log.csv")):
        assert (tmp_path / "a" / sub / name).read_bytes() == (tmp_path / "b" / sub / name).read_bytes()


def test_seed_override_is_recorded(tmp_path):
    out = tmp_path / "c"
    main(["classify", "--input", str(DATA / "graph.json"), "--seed", "11", "--out", str(out)])
    assert read_report(out, "classification_report.json")["config"]["seed"] == 11
