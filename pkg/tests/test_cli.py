import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from cuntzsections import element_matrix, io, parse_element
from cuntzsections.cli import EXIT_INPUT, EXIT_OK, run
from cuntzsections.spectral import BOUNDARY_RTOL


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_stability_stable(tmp_path, capsys):
    assert run(["stability", "--N", "2", "I + 0.5*S0", "--out", str(tmp_path)]) == EXIT_OK
    assert "verdict: stable" in capsys.readouterr().out
    d = json.loads((tmp_path / "stability.json").read_text())
    assert d["version"] == 1 and d["command"] == "stability" and d["verdict"] == "stable"
    assert d["sizes"] == [2**p for p in range(9)]
    assert min(d["sigma_min"]) >= 0.5 - 1e-12


def test_stability_compact_cause(tmp_path, capsys):
    unit = tmp_path / "unit00.csv"
    unit.write_text("row,col,re,im\n0,0,-1,0\n")
    assert run(["stability", "I", "--compact", str(unit), "--max-power", "5", "--out", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "stability.json").read_text())
    assert d["verdict"] == "unstable" and d["causes"] == ["W"]


def test_fractal_check(tmp_path, capsys):
    assert run(["fractal-check", "--N", "2", "--max-n", "12", "--out", str(tmp_path)]) == 0
    table = [r for r in rows(tmp_path / "fractal.csv") if r["sequence"] == "first"]
    assert [int(r["n"]) for r in table] == list(range(1, 13))
    for r in table:
        assert float(r["norm"]) == (1.0 if int(r["n"]) % 2 else 0.0)
        assert r["match"] == "1"


def test_fredholm(tmp_path, capsys):
    unit = tmp_path / "unit00.csv"
    io.write_matrix_csv(unit, np.array([[-1.0]]))
    assert run(["fredholm", "--N", "2", "I", "--compact", str(unit), "--out", str(tmp_path)]) == 0
    assert "alpha = 1" in capsys.readouterr().out
    d = json.loads((tmp_path / "fredholm.json").read_text())
    assert d["alpha"] == 1
    assert len(rows(tmp_path / "fredholm_sigma.csv")) == len(d["sizes"])


def test_matrix_roundtrip(tmp_path):
    assert run(["matrix", "S0 S1^* + 2*S1", "--size", "10", "--out", str(tmp_path)]) == 0
    M = io.read_matrix_csv(tmp_path / "matrix.csv")
    assert M.shape == (10, 10)
    assert np.array_equal(M, element_matrix(parse_element("S0 S1^* + 2*S1", 2), 10))


def test_pseudospec(tmp_path):
    assert run(["pseudospec", "S0", "--size", "4", "--grid", "11", "--eps", "0.3", "--out", str(tmp_path)]) == 0
    table = rows(tmp_path / "pseudospec.csv")
    assert list(table[0]) == ["re", "im", "sigma_min", "in_set"]
    assert len(table) == 121
    # boundary included with the relative slack used by the library
    assert all((float(r["sigma_min"]) <= 0.3 * (1 + BOUNDARY_RTOL)) == (r["in_set"] == "1") for r in table)


def test_spectra_and_symbol(tmp_path):
    assert run(["spectra", "S0 S0^*", "--max-power", "4", "--out", str(tmp_path)]) == 0
    table = rows(tmp_path / "spectra_hausdorff.csv")
    assert [float(r["d_sigma2"]) for r in table][1:] == [0.0] * 4
    assert run(["symbol", "S0", "--blocks", "3", "--inner", "4", "--out", str(tmp_path)]) == 0
    assert io.read_matrix_csv(tmp_path / "symbol.csv").shape == (12, 12)


def test_lifting_check(tmp_path):
    assert run(["lifting-check", "S0", "--max-power", "5", "--out", str(tmp_path)]) == 0
    d = json.loads((tmp_path / "lifting.json").read_text())
    assert d["checks"] and all(c["match"] for c in d["checks"])
    assert run(["lifting-check", "--p1", "--max-power", "5", "--out", str(tmp_path)]) == 0


def test_seeded_random_element_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["stability", "--seed", "5", "--max-power", "4", "--out", str(a)]) == 0
    assert run(["stability", "--seed", "5", "--max-power", "4", "--out", str(b)]) == 0
    assert (a / "stability.json").read_text() == (b / "stability.json").read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["stability", "S5"],
        ["stability"],
        ["bogus"],
        ["stability", "I", "--schedule", "list"],
        ["fredholm", "I", "--compact", "/nonexistent.csv"],
        ["fredholm", "I", "--k-max", "0"],
        ["spectra", "I", "--schedule", "list", "--sizes", "3,5,7"],
    ],
)
def test_input_errors(tmp_path, argv, capsys):
    assert run(argv + ["--out", str(tmp_path)] if argv != ["bogus"] else argv) == EXIT_INPUT


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(["stability", "I", "--out", str(blocker / "sub")]) == EXIT_INPUT


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cuntzsections", "stability", "I", "--max-power", "3", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "verdict: stable" in proc.stdout
