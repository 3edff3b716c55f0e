import json
import math
import os
import subprocess

import pytest

BIN = os.environ.get("ODOLAB_BIN", "odolab")


def run(*args, env=None, check=None):
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=env)
    if check is not None:
        assert p.returncode == check, p.stderr
    return p


def build(tmp_path, name, *params):
    path = tmp_path / f"{name}.json"
    run("gallery", "build", name, *params, "--out", str(path), check=0)
    return str(path)


def report(*args):
    return json.loads(run(*args, check=0).stdout)


def test_classify_shift(tmp_path):
    f = build(tmp_path, "shift", "k=1", "n=2", "d=2")
    r = report("classify", f)
    assert r["result"]["isometric"]["value"] is True
    assert r["result"]["fredholm_index"] == -2
    assert r["config"]["command"] == "classify"
    assert r["config"]["depth"] == 6


def test_malformed_json_exits_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    p = run("classify", str(bad))
    assert p.returncode == 1
    assert "error" in p.stderr


def test_missing_file_and_bad_flags_exit_1(tmp_path):
    assert run("classify", str(tmp_path / "none.json")).returncode == 1
    assert run("classify").returncode == 1
    f = build(tmp_path, "shift")
    assert run("classify", f, "--n", "3").returncode == 1
    assert run("classify", f, "--format", "xml").returncode == 1
    assert run("classify", f, "--tol-exact", "1e-3", "--tol-rank", "1e-6").returncode == 1


def test_boundary_zero_exit_2(tmp_path):
    f = tmp_path / "one_plus_z.json"
    f.write_text(json.dumps({"n": 2, "dim": 1, "entries": [
        {"word": [], "s": 1, "q": 1, "re": 1.0, "im": 0.0},
        {"word": [1], "s": 1, "q": 1, "re": 1.0, "im": 0.0}]}))
    assert run("classify", str(f), "--invertibility").returncode == 2
    r = report("classify", str(f))
    assert r["result"]["invertible"]["value"] == "undecided"
    assert run("symbol", str(f), "--invertible").returncode == 2


def test_reports_are_byte_identical(tmp_path):
    f = build(tmp_path, "projection")
    a = run("classify", f, "--seed", "3", check=0).stdout
    b = run("classify", f, "--seed", "3", check=0).stdout
    assert a == b


def test_symbol_analytics(tmp_path):
    m = report("symbol", build(tmp_path, "golden"), "--theta")
    c0 = m["result"]["theta"][0]["matrix"][0][0][0]
    assert abs(c0 - math.sqrt(2 / (math.sqrt(5) + 3))) < 1e-12
    assert report("symbol", build(tmp_path, "shift"), "--inner")["result"]["inner"]["value"] is True
    assert report("symbol", build(tmp_path, "resolvent"), "--inner")["result"]["inner"]["value"] is False


def test_verify_adjoint_and_fault():
    p = run("verify", "adjoint", "--seed", "7", "--format", "text", check=0)
    assert p.stdout.strip().splitlines()[-1].startswith("PASS")
    p = run("verify", "douglas", "--inject-fault")
    assert p.returncode == 3
    assert "residual" in p.stderr


def test_other_commands(tmp_path):
    shift = build(tmp_path, "shift")
    assert report("defect", shift)["result"]["defect_dim"] == 1
    assert abs(report("norm", shift, "--depth", "3")["result"]["sigma_max_WL"] - 1) < 1e-12
    assert report("coburn", shift, "--lambda", "0.5,0.5")["result"]["points"][0]["holds"] is True
    hypo = build(tmp_path, "hypo")
    assert abs(report("hypo", hypo)["result"]["max_gap"] - 1) < 1e-10
    vac = build(tmp_path, "vacuum", "d=1")
    assert run("douglas", vac, shift).returncode == 2
    assert run("coburn", build(tmp_path, "constant_plus_shift"), "--lambda", "0").returncode == 2
    csv = run("norm", shift, "--format", "csv", check=0).stdout
    assert csv.startswith("key,value\n")


def test_dump(tmp_path):
    shift = build(tmp_path, "shift")
    lines = run("dump", shift, "--depth", "2", check=0).stdout.splitlines()
    assert lines[0].split() == ["#", "2", "1", "2", "3"]
    assert len(lines) == 1 + 7


def test_gallery_errors():
    assert run("gallery", "build", "nope").returncode == 1
    assert run("gallery", "build", "shift", "bogus=1").returncode == 1
    assert run("gallery", "build", "constant_plus_shift", "a=0").returncode == 2


def test_cap(tmp_path):
    f = build(tmp_path, "shift", "n=3")
    env = dict(os.environ, ODOLAB_CAP="50")
    p = run("classify", f, env=env)
    assert p.returncode == 1
    assert "ODOLAB_CAP" in p.stderr
