import json

import pytest
from click.testing import CliRunner

from projcells.cli import RunConfig, main
from projcells.errors import DomainError

ONES = {k: "1" for k in ("t012", "t210", "e01", "e10", "e02", "e20", "e12", "e21")}


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def run(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


def test_validate_ok(runner, write):
    res = run(runner, "validate", write("ones.json", ONES))
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert out["valid"] and out["T"] == "1" and out["E"] == "1"


def test_validate_bad_edge_product(runner, write):
    res = run(runner, "validate", write("bad.json", {**ONES, "e01": "2"}))
    assert res.exit_code == 2
    assert json.loads(res.stdout)["E"] == "2"


def test_validate_fig5_float(runner, write):
    obj = {"t012": "0.7937005259840997373758528196361541301957", "t210": "1.259921049894873164767210607278228350570",
           "e01": "1", "e10": "1.587401051968199474751705639272308260391", "e02": "1", "e20": "1",
           "e12": "2", "e21": "0.3149802624737182911918026518195570876426"}
    res = run(runner, "--mode", "float", "--tol", "1e-30", "validate", write("f5.json", obj))
    assert res.exit_code == 0, res.output


def test_parse_error_reports_position(runner, write):
    res = run(runner, "validate", write("broken.json", '{"t012": 1,\n  "e01": }'))
    assert res.exit_code == 1
    assert "line 2" in res.stderr


def test_missing_keys(runner, write):
    res = run(runner, "validate", write("partial.json", {"t012": 1, "t210": 1, "e10": 2}))
    assert res.exit_code == 1


def test_holonomy_command(runner, write):
    res = run(runner, "holonomy", write("ones.json", ONES))
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert set(out) == {"r", "g", "b"} and len(out["r"]) == 3


def test_classify_torus(runner, write):
    res = run(runner, "classify", write("ones.json", ONES))
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert out["flips"] == [] and out["flat_edges"] == []
    assert out["address"] == {"yellow": "0/1", "cyan": "1/1", "magenta": "1/0"}


def test_classify_flat_point(runner, write):
    obj = {"t012": "3", "t210": "1/3", "e01": 1, "e10": 1, "e02": "15", "e20": "1/15", "e12": 1, "e21": 1}
    out = json.loads(run(runner, "classify", write("flat.json", obj)).stdout)
    assert out["flat_edges"] == ["cyan"]


def test_classify_sphere(runner, write):
    res = run(runner, "classify", write("s03.json", {"t012": 1, "e01": 1, "w0": 3, "w1": 1, "w2": 1}))
    assert json.loads(res.stdout) == {"cell": "Delta0", "walls": []}


def test_classify_budget(runner, write):
    obj = {"t012": "3", "t210": "1/3", "e01": 1, "e10": 1, "e02": "20", "e20": "1/20", "e12": 1, "e21": 1}
    res = run(runner, "--max-flips", "1", "classify", write("v.json", obj))
    assert res.exit_code == 0
    res = runner.invoke(main, ["--max-flips", "0", "classify", write("v.json", obj)])
    assert res.exit_code == 1


def test_classify_off_locus(runner, write):
    res = run(runner, "classify", write("bad.json", {**ONES, "e01": "2"}))
    assert res.exit_code == 2


def test_flip_command(runner, write):
    res = run(runner, "--mode", "float", "flip", write("ones.json", ONES), "--edge", "cyan")
    assert res.exit_code == 0
    assert set(json.loads(res.stdout)) == set(ONES)


def test_clover_writes_svg(runner, write, tmp_path):
    out = tmp_path / "out"
    res = run(runner, "--depth", "4", "--out", str(out), "clover", write("ones.json", ONES))
    assert res.exit_code == 0
    rep = json.loads(res.stdout)
    assert rep["passed"] and (out / "ones.svg").exists()
    first = (out / "ones.svg").read_text()
    run(runner, "--depth", "4", "--out", str(out), "clover", write("ones.json", ONES))
    assert (out / "ones.svg").read_text() == first


def test_clover_depth_zero(runner, write, tmp_path):
    res = run(runner, "--depth", "0", "--out", str(tmp_path), "clover", write("ones.json", ONES))
    svg = (tmp_path / "ones.svg").read_text()
    assert svg.count("<circle") == 3 + 3


def test_clover_budget(runner, write, tmp_path):
    res = run(runner, "--depth", "11", "--out", str(tmp_path), "clover", write("ones.json", ONES))
    assert res.exit_code == 4


def test_sweep_writes_eight_frames(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("PROJCELLS_OUT", str(tmp_path / "env"))
    res = runner.invoke(main, ["--depth", "2", "sweep"])
    out = json.loads(res.stdout)
    assert len(out["frames"]) == 8
    names = sorted(p.name for p in (tmp_path / "env").glob("*.svg"))
    assert names[0] == "fig5_mu+0.0.svg" and len(names) == 8
    assert res.exit_code == (0 if all(f["passed"] for f in out["frames"]) else 1)


def test_scan_command(runner, tmp_path):
    res = run(runner, "--out", str(tmp_path), "scan", "--n", "2", "--lo", "1/2", "--hi", "2")
    out = json.loads(res.stdout)
    assert out["samples"] >= 32 and (tmp_path / "scan.csv").exists()
    assert res.exit_code == (0 if out["passed"] else 1)


def test_config_file(runner, write):
    cfg = write("cfg.json", {"mode": "float", "precision": 128, "tolerance": 1e-20})
    res = run(runner, "--config", cfg, "validate", write("ones.json", ONES))
    assert res.exit_code == 0


def test_bad_config(runner, write):
    res = runner.invoke(main, ["--precision", "64", "--tol", "1e-30", "validate", write("ones.json", ONES)])
    assert res.exit_code == 1


def test_runconfig_rules():
    RunConfig()
    with pytest.raises(DomainError):
        RunConfig(precision=100, tolerance=1e-40)
    with pytest.raises(DomainError):
        RunConfig(max_flips=0)
