import json

import numpy as np
import pytest

from nugs.cli import main
from nugs.fourier import FunctionSpec, basis_transform, sample_function, save_data_csv
from nugs.sampling import SchemeSpec, generate
from nugs.solver import Reconstruction
from nugs.spaces import SpaceSpec, build_basis


def run(args):
    return main([str(a) for a in args])


def test_reconstruct_synthetic_round_trip(tmp_path):
    code = run(["reconstruct", "--space", "trig:3", "--scheme", "jittered:0.2",
                "--k", 20, "--n", 60, "--seed", 3, "--out-dir", tmp_path])
    assert code == 0
    rec = Reconstruction.from_json((tmp_path / "coefficients.json").read_text())
    assert rec.space == SpaceSpec.trig(3)
    diag = json.loads((tmp_path / "diagnostics.json").read_text())
    assert diag["c_ratio"] <= 3.0
    assert diag["weights"] == "computed"
    lines = (tmp_path / "reconstruction.csv").read_text().splitlines()
    assert lines[0] == "x,re,im"
    assert len(lines) == 513


def test_reconstruct_underdetermined_exits_2(tmp_path, capsys):
    code = run(["reconstruct", "--space", "trig:8", "--scheme", "uniform",
                "--k", 3, "--n", 7, "--out-dir", tmp_path])
    assert code == 2
    assert "unstable" in capsys.readouterr().err


def test_reconstruct_from_csv_with_weights(tmp_path):
    spec = SpaceSpec.legendre(4)
    basis = build_basis(spec)
    s = generate(SchemeSpec("jittered", 50, 16.0, theta=0.2, seed=5))
    data = sample_function(FunctionSpec.benchmark(), s)
    save_data_csv(tmp_path / "data.csv", data)
    code = run(["reconstruct", "--space", "legendre:4", "--input",
                tmp_path / "data.csv", "--out-dir", tmp_path])
    assert code == 0
    diag = json.loads((tmp_path / "diagnostics.json").read_text())
    assert diag["weights"] == "file"


def test_reconstruct_csv_without_weight_column(tmp_path):
    path = tmp_path / "noweight.csv"
    rows = ["omega,re,im"]
    s = generate(SchemeSpec("uniform", 30, 10.0))
    vals = np.exp(-1j * np.pi * s.points) * np.sinc(s.points)
    for w, v in zip(s.points, vals):
        rows.append(f"{float(w)!r},{float(v.real)!r},{float(v.imag)!r}")
    path.write_text("\n".join(rows) + "\n")
    code = run(["reconstruct", "--space", "piecewise_const:2", "--input", path,
                "--out-dir", tmp_path])
    assert code == 0
    diag = json.loads((tmp_path / "diagnostics.json").read_text())
    assert diag["weights"] == "computed"
    rec = Reconstruction.from_json((tmp_path / "coefficients.json").read_text())
    # data comes from the constant function: both cells at 1/sqrt(2)
    assert np.allclose(rec.coefficients, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-9)


def test_reconstruct_malformed_csv_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("omega,re,im\n0.0,1.0,0.0\n0.5,zap,0.0\n")
    code = run(["reconstruct", "--space", "trig:1", "--input", path,
                "--out-dir", tmp_path])
    assert code == 1
    assert ":3" in capsys.readouterr().err


def test_usage_error_exits_1(capsys):
    assert run(["reconstruct"]) == 1
    assert "usage error" in capsys.readouterr().err
    assert run(["no-such-command"]) == 1


def test_stability_command(tmp_path, capsys):
    code = run(["stability", "--space", "trig:2", "--scheme", "uniform",
                "--k", 10, "--n", 40, "--out-dir", tmp_path])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ratio"] <= 3.0
    assert out["density"] == pytest.approx(0.5)


def test_stability_command_threshold_exit(tmp_path, capsys):
    code = run(["stability", "--space", "trig:8", "--scheme", "uniform",
                "--k", 3, "--n", 40, "--threshold", 3, "--out-dir", tmp_path])
    assert code == 2
    assert json.loads(capsys.readouterr().out)["ratio"] > 3.0


def test_residual_command_monotone_csv(tmp_path):
    code = run(["residual", "--space", "legendre:3", "--zmax", 40,
                "--zcount", 8, "--out-dir", tmp_path])
    assert code == 0
    lines = (tmp_path / "residual.csv").read_text().splitlines()
    assert lines[0] == "z,e"
    es = [float(line.split(",")[1]) for line in lines[1:]]
    assert all(a >= b - 1e-12 for a, b in zip(es, es[1:]))


def test_gap_command_hand_value(tmp_path, capsys):
    code = run(["gap", "--space", "legendre:1", "--l", 2, "--out-dir", tmp_path])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["gap"] == pytest.approx(0.5, abs=1e-10)
    assert out["bound"] == pytest.approx(0.5513, abs=1e-4)
    assert out["holds"]


def test_scaling_command_writes_csv_and_svg(tmp_path):
    code = run(["scaling", "--family", "legendre", "--scheme", "jittered:0.2",
                "--kmin", 6, "--kmax", 24, "--kcount", 3, "--seed", 2,
                "--out-dir", tmp_path])
    assert code == 0
    csv = (tmp_path / "scaling_legendre_jittered.csv").read_text()
    assert csv.splitlines()[0] == "k,n,m,ratio,c_ratio"
    svg = (tmp_path / "scaling_legendre_jittered.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_figure1_byte_identical_reruns(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    for out in (out1, out2):
        code = run(["figure1", "--seed", 7, "--kmin", 6, "--kmax", 12,
                    "--kcount", 2, "--out-dir", out])
        assert code == 0
    for name in ("scaling_jittered.csv", "scaling_log.csv", "error_jittered.csv",
                 "error_log.csv", "scaling_jittered.svg", "error_log.svg"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_env_var_default_out_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NUGS_OUT_DIR", str(tmp_path / "envout"))
    code = run(["residual", "--space", "legendre:1", "--zmax", 4, "--zcount", 3])
    assert code == 0
    assert (tmp_path / "envout" / "residual.csv").exists()
