import hashlib
import json
import os
import shutil
import subprocess
import sys

import numpy as np
import pytest

from btps.cli import ExperimentConfig, atomic_write, main
from btps.presets import PRESETS


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return np.array([[complex(c) for c in line.strip().split(",")] for line in fh])


def test_build_dimension(tmp_path, capsys):
    code, out, _ = _run(["build", "--preset", "sphere-linear-t1", "--levels", "8",
                         "--out", str(tmp_path)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert "build_N8.csv" in summary["outputs"]
    A = _read_matrix(tmp_path / "build_N8.csv")
    assert A.shape == (9, 9)
    from btps.sphere import linear_hamiltonian
    assert np.array_equal(A, linear_hamiltonian(1.0, 8).entries)


def test_pseudospec_bargmann(tmp_path, capsys):
    code, _, _ = _run(["pseudospec", "--preset", "bargmann-mu05", "--levels", "40",
                       "--window=-1.6,1.6,-0.6,0.6", "--grid", "17,13", "--out", str(tmp_path)],
                      capsys)
    assert code == 0
    rows = (tmp_path / "pseudospec_N40.csv").read_text().splitlines()
    assert rows[0] == "re,im,sigma_min"
    vals = {(float(r), float(i)): float(s) for r, i, s in (l.split(",") for l in rows[1:])}
    assert len(vals) == 17 * 13
    assert vals[(0.0, 0.0)] <= 1e-3


def test_presets_command(capsys):
    code, out, _ = _run(["presets"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc["presets"]) == set(PRESETS)
    assert {"bargmann-mu05", "sphere-linear-t1", "torus-scottish", "torus-twisted",
            "sphere-x3"} <= set(doc["presets"])


def test_unknown_preset(tmp_path, capsys):
    code, _, err = _run(["build", "--preset", "no-such", "--out", str(tmp_path)], capsys)
    assert code == 2
    assert json.loads(err)["error"] == "unknown-preset"


def test_schema_error_pointer(tmp_path, capsys):
    code, _, err = _run(["pseudospec", "--preset", "bargmann-mu05", "--levels", "10",
                         "--window=1,0,0,1", "--out", str(tmp_path)], capsys)
    assert code == 2
    doc = json.loads(err)
    assert doc["error"] == "schema" and doc["pointer"] == "/window"
    cfg = dict(PRESETS["sphere-x3"], symbol="sphere-x3", command="build", output_dir="x")
    cfg["grid"] = [1, 5]
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    code, _, err = _run(["build", "--config", str(path)], capsys)
    assert code == 2 and json.loads(err)["pointer"] == "/grid"


def test_numerical_failure_exit(tmp_path, capsys, monkeypatch):
    def broken(*a, **k):
        raise np.linalg.LinAlgError("no convergence")
    monkeypatch.setattr(np.linalg, "svd", broken)
    code, _, err = _run(["pseudospec", "--preset", "bargmann-mu05", "--levels", "10",
                         "--grid", "3,3", "--out", str(tmp_path)], capsys)
    assert code == 3
    assert json.loads(err)["error"] == "numerical"


def _hashes(d):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(d.iterdir())}


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_determinism(tmp_path, capsys, name):
    out = tmp_path / "run"
    argv = ["pseudospec", "--preset", name, "--levels", "12", "--grid", "5,4", "--out", str(out)]
    assert _run(argv, capsys)[0] == 0
    first = _hashes(out)
    shutil.rmtree(out)
    assert _run(argv, capsys)[0] == 0
    assert _hashes(out) == first


def test_atomic_write_leaves_no_partial(tmp_path, monkeypatch):
    target = tmp_path / "out.json"
    atomic_write(str(target), "old\n")

    def interrupted(src, dst):
        raise KeyboardInterrupt
    monkeypatch.setattr(os, "replace", interrupted)
    with pytest.raises(KeyboardInterrupt):
        atomic_write(str(target), "new\n")
    assert target.read_text() == "old\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_run_leaves_only_declared_files(tmp_path, capsys):
    assert _run(["numrange", "--preset", "torus-scottish", "--levels", "8,16",
                 "--out", str(tmp_path)], capsys)[0] == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert not any(n.startswith(".tmp") for n in names)
    assert "numrange.json" in names


def test_config_round_trip(tmp_path, capsys):
    assert _run(["scaling", "--preset", "sphere-x3", "--levels", "8,16,32,64",
                 "--out", str(tmp_path)], capsys)[0] == 0
    doc = json.loads((tmp_path / "config.json").read_text())
    assert doc.pop("v") == 1
    cfg = ExperimentConfig.from_dict(doc)
    assert cfg.to_dict() == doc
    rep = json.loads((tmp_path / "scaling.json").read_text())
    from btps.fits import ScalingReport
    assert ScalingReport.from_json(rep).to_json() == rep


def test_symbol_file(tmp_path, capsys):
    sym = tmp_path / "sym.json"
    sym.write_text(json.dumps({"space": "torus", "terms": [{"k": [1, 0], "re": 1.0, "im": 0.0}]}))
    code, out, _ = _run(["build", "--symbol", str(sym), "--levels", "10", "--out",
                         str(tmp_path / "o")], capsys)
    assert code == 0
    A = _read_matrix(tmp_path / "o" / "build_N10.csv")
    j = np.arange(10)
    assert np.allclose(A[(j + 1) % 10, j], np.exp(-np.pi / 20))


def test_console_script(tmp_path):
    exe = shutil.which("btps")
    cmd = [exe] if exe else [sys.executable, "-m", "btps.cli"]
    res = subprocess.run(cmd + ["presets"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "torus-twisted" in json.loads(res.stdout)["presets"]
