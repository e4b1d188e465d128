import json
import subprocess
import sys

import numpy as np
import pytest

from isoasym.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from isoasym.config import ConfigError, builtin, config_from_dict, load_config
from isoasym.viz import read_obj_vertices

from conftest import FIGURES


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, data, name="c.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


# -- example / config --------------------------------------------------------


def test_example_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "example", "--name", "ex1")
    assert code == EXIT_OK
    path = tmp_path / "ex1.json"
    path.write_text(out)
    c = load_config(path)
    assert c.name == "ex1"
    assert c.to_dict() == config_from_dict(builtin("ex1")).to_dict()


def test_example_all(capsys):
    code, out, _ = run(capsys, "example")
    assert code == EXIT_OK
    assert sorted(json.loads(out)) == ["ex1", "ex2a", "ex2b"]


def test_example_directory(capsys, tmp_path):
    assert run(capsys, "example", "--out", str(tmp_path / "cfg"))[0] == EXIT_OK
    files = sorted(p.name for p in (tmp_path / "cfg").iterdir())
    assert files == ["ex1.json", "ex2a.json", "ex2b.json"]
    for f in files:
        load_config(tmp_path / "cfg" / f)


def test_config_error_paths():
    d = builtin("ex1")
    d["ms"]["t0"] = 2.0
    with pytest.raises(ConfigError) as info:
        config_from_dict(d)
    assert any(path == "ms.t0" for path, _ in info.value.errors)

    d = builtin("ex1")
    d["curve"]["components"] = d["curve"]["components"][:3]
    with pytest.raises(ConfigError) as info:
        config_from_dict(d)
    assert any("curve.components" in path for path, _ in info.value.errors)

    d = builtin("ex1")
    d["curve"]["components"][3] = "sqrt(2)/2*"
    with pytest.raises(ConfigError) as info:
        config_from_dict(d)
    assert [p for p, _ in info.value.errors] == ["curve.components[3]"]


def test_unknown_keys_rejected():
    d = builtin("ex1")
    d["ms"]["y"] = "0"
    d["extra"] = 1
    with pytest.raises(ConfigError) as info:
        config_from_dict(d)
    paths = {p for p, _ in info.value.errors}
    assert {"ms.y", "extra"} <= paths


def test_constant_expression_scalars():
    c = config_from_dict(builtin("ex2b"))
    assert c.curve.interval[1] == pytest.approx(np.pi / 2)


def test_bad_config_exit_code(capsys, tmp_path):
    d = builtin("ex1")
    d["ms"]["t0"] = 2.0
    code, _, err = run(capsys, "verify", "--config", write_config(tmp_path, d))
    assert code == EXIT_INPUT and "ms.t0" in err
    code, _, err = run(capsys, "verify", "--config", str(tmp_path / "nope.json"))
    assert code == EXIT_INPUT


def test_non_unit_speed_curve_rejected(capsys, tmp_path):
    d = builtin("ex1")
    d["curve"]["components"] = ["cos(s)", "sin(s)", "s", "0"]
    code, _, err = run(capsys, "frenet", "--config", write_config(tmp_path, d))
    assert code == EXIT_INPUT and "curve" in err


# -- frenet -----------------------------------------------------------------


def _table(out):
    lines = out.strip().splitlines()
    header = lines[0].split("\t")
    return [dict(zip(header, map(float, line.split("\t")))) for line in lines[1:]]


def test_frenet_ex1(capsys):
    code, out, _ = run(capsys, "frenet", "--name", "ex1")
    assert code == EXIT_OK
    rows = _table(out)
    assert len(rows) == 9
    r = rows[0]
    assert r["s"] == 0 and r["kappa1"] == 0.5
    assert r["kappa2"] == pytest.approx(-np.sqrt(3) / 2, abs=1e-9)
    assert r["kappa3"] == 0
    assert (r["B2_1"], r["B2_2"]) == (0, 0)
    assert r["B2_3"] == pytest.approx(np.sqrt(6) / 3, abs=1e-9)


def test_frenet_ex2a_samples(capsys):
    code, out, _ = run(capsys, "frenet", "--name", "ex2a", "--samples", "4")
    rows = _table(out)
    assert code == EXIT_OK and len(rows) == 4
    assert all(r["kappa1"] == 0.5 for r in rows)
    assert rows[-1]["s"] == 3


def test_samples_must_be_at_least_two(capsys):
    assert run(capsys, "frenet", "--name", "ex1", "--samples", "1")[0] == EXIT_INPUT


# -- verify -----------------------------------------------------------------


@pytest.mark.parametrize("name", ["ex1", "ex2a", "ex2b"])
def test_verify_builtins(capsys, name):
    code, out, _ = run(capsys, "verify", "--name", name)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["passed"] and rep["name"] == name


def test_verify_ex2b_closed_grid_fails(capsys, tmp_path):
    d = builtin("ex2b")
    d["grid"]["s_open"] = [False, False]
    code, out, _ = run(capsys, "verify", "--config", write_config(tmp_path, d))
    rep = json.loads(out)
    assert code == EXIT_FAILED
    assert rep["isoparametric_pass"] and not rep["asymptotic_pass"]


def test_verify_mutated_ex1(capsys, tmp_path):
    d = builtin("ex1")
    d["ms"]["w"] = "t-1/2"
    code, out, _ = run(capsys, "verify", "--config", write_config(tmp_path, d))
    rep = json.loads(out)
    assert code == EXIT_FAILED
    assert rep["max_abs_phi2"] == pytest.approx(1.0, abs=1e-12)


def test_verify_is_deterministic(capsys):
    outs = {run(capsys, "verify", "--name", "ex2a")[1] for _ in range(2)}
    assert len(outs) == 1


# -- mesh -------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(FIGURES))
def test_mesh_figures(capsys, tmp_path, name):
    fix, proj, closed = FIGURES[name]
    out = tmp_path / f"{name}.obj"
    csv_path = tmp_path / f"{name}.csv"
    code, _, _ = run(capsys, "mesh", "--name", name, "--fix", fix, "--project", proj,
                     "--out", str(out), "--csv", str(csv_path))
    assert code == EXIT_OK
    verts = read_obj_vertices(out)
    assert verts.shape == (650, 3)
    params = np.loadtxt(csv_path, delimiter=",", skiprows=1)[:, :2]
    assert np.max(np.abs(verts[:625] - closed(params[:, 0], params[:, 1]))) <= 1e-9


def test_mesh_uses_config_defaults(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(capsys, "mesh", "--name", "ex2b", "--samples", "5")[0] == EXIT_OK
    text = (tmp_path / "ex2b.obj").read_text()
    assert text.startswith("# ex2b: slice t=1, projection drop:3, grid 5x5")
    assert text.count("\nf ") == 16


def test_mesh_bad_fix(capsys, tmp_path):
    code, _, err = run(capsys, "mesh", "--name", "ex1", "--fix", "z=0", "--out", str(tmp_path / "m.obj"))
    assert code == EXIT_INPUT and "--fix" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "isoasym", "verify", "--name", "ex1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["passed"]
