"""Command line driver: exit codes, JSON determinism, file handling."""

import json

import pytest

from conetorsion import cli
from conetorsion.cli import main, parse_base
from conetorsion.spectrum import UnsupportedManifoldError


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_base():
    M = parse_base("sphere:3")
    assert M.kind == "sphere" and M.n == 3 and M.rank == 1
    M = parse_base("torus:5:2:1/4")
    assert M.kind == "torus" and M.rank == 2 and str(M.scale) == "1/4"
    with pytest.raises(UnsupportedManifoldError):
        parse_base("klein:3")
    with pytest.raises(UnsupportedManifoldError):
        parse_base("sphere:x")


def test_torsion_sphere1(capsys):
    code, out, _ = run(capsys, "torsion", "--base", "sphere:1", "--precision", "30")
    assert code == 0
    data = json.loads(out)
    assert float(data["breakdown"]["res_spectral"]) == 0
    assert float(data["breakdown"]["res_anomaly"]) == 0


def test_torsion_sphere3_passes_audits(capsys):
    code, out, _ = run(capsys, "torsion", "--base", "sphere:3", "--precision", "30")
    assert code == 0
    data = json.loads(out)
    assert float(data["audits"]["headline_gap"]) < 1e-6


def test_torsion_table_format(capsys):
    code, out, _ = run(capsys, "torsion", "--base", "sphere:1", "--precision", "30",
                       "--format", "table")
    assert code == 0
    assert "total" in out and "audit:headline_gap" in out


def test_torsion_determinism(capsys):
    _, out1, _ = run(capsys, "torsion", "--base", "sphere:3", "--precision", "30")
    _, out2, _ = run(capsys, "torsion", "--base", "sphere:3", "--precision", "30")
    assert out1 == out2


def test_torsion_spectrum_file_flagged(capsys, tmp_path):
    path = tmp_path / "s3.spec"
    code, _, _ = run(capsys, "spectrum", "--base", "sphere:3", "--cutoff", "80",
                     "--out", str(path))
    assert code == 0
    code, out, _ = run(capsys, "torsion", "--spectrum-file", str(path), "--precision", "25")
    assert code == 0
    assert json.loads(out)["approximate"] is True


def test_spectrum_round_trip(capsys, tmp_path):
    path = tmp_path / "s1.spec"
    code, _, _ = run(capsys, "spectrum", "--base", "sphere:1", "--cutoff", "10",
                     "--out", str(path))
    assert code == 0
    lines = [l for l in path.read_text().splitlines()
             if "," in l and not l.startswith("betti=")]
    assert len(lines) == 10 and all(l.endswith(",2") for l in lines)
    code, out, _ = run(capsys, "spectrum", "--base", "sphere:1", "--cutoff", "10")
    assert code == 0 and out == path.read_text()


def test_bad_inputs(capsys):
    code, _, err = run(capsys, "torsion", "--base", "worm:3")
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "torsion", "--base", "sphere:3", "--precision", "10")
    assert code == 1
    code, _, err = run(capsys, "spectrum", "--base", "sphere:1", "--cutoff", "10",
                       "--out", "/nonexistent-dir/x.spec")
    assert code == 1
    code, _, err = run(capsys, "torsion", "--spectrum-file", "/no/such/file")
    assert code == 1


def test_verify_suite_lines(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "dm", "--rmax", "9")
    assert code == 0
    rec = json.loads(out.splitlines()[0])
    assert rec["suite"] == "dm" and rec["passed"] is True
    code, out, _ = run(capsys, "verify", "--suite", "scaling")
    assert code == 0


def test_env_precision_default(monkeypatch):
    monkeypatch.setenv(cli.DEFAULT_PRECISION_ENV, "33")
    ap = cli.build_parser()
    args = ap.parse_args(["torsion", "--base", "sphere:1"])
    assert args.precision == 33
