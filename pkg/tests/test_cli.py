import json
from pathlib import Path

import numpy as np
import pytest

from subspace_cond import Matrix
from subspace_cond.cli import EXIT_BOUNDARY, EXIT_OK, EXIT_USAGE, main
from subspace_cond.matrix_io import loads_report, read_matrix, write_matrix

from conftest import pseudodiag_6x5

GOLDEN = Path(__file__).parent / "golden" / "pseudodiag_cond_pi3.json"


@pytest.fixture
def a3_file(tmp_path):
    path = tmp_path / "a3.txt"
    write_matrix(path, pseudodiag_6x5())
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cond_finite(capsys, a3_file):
    code, out, _ = run(capsys, "cond", a3_file, "--pi", "3")
    assert code == EXIT_OK
    assert "kappa   70.711570902065" in out


def test_cond_boundary(capsys, a3_file):
    code, out, _ = run(capsys, "cond", a3_file, "--pi", "5", "--json")
    assert code == EXIT_BOUNDARY
    rep = loads_report(out)
    assert rep["kappa"] == float("inf") and rep["member"] is False
    assert json.loads(out)["kappa"] == "inf"


def test_cond_empty_selection(capsys, a3_file):
    code, out, _ = run(capsys, "cond", a3_file, "--pi", "")
    assert code == EXIT_OK
    assert "kappa   0" in out


@pytest.mark.parametrize("argv", [
    ("cond", "{f}", "--pi", "7"),
    ("cond", "{f}", "--pi", "1,x"),
    ("cond", "{f}", "--pi", "2,2"),
    ("cond", "missing.txt", "--pi", "1"),
    ("cond", "{f}", "--side", "up"),
    ("bogus",),
])
def test_usage_errors(capsys, a3_file, argv):
    argv = [a.format(f=a3_file) for a in argv]
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == EXIT_USAGE


def test_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 2 real\n1 2 3\n")
    code, _, err = run(capsys, "cond", bad, "--pi", "1")
    assert code == EXIT_USAGE and "expected 4 numbers" in err


def test_cond_golden_json(capsys, a3_file):
    code, out, _ = run(capsys, "cond", a3_file, "--pi", "3", "--json")
    assert code == EXIT_OK
    assert json.loads(out) == json.loads(GOLDEN.read_text())


def test_cond_right_side(capsys, tmp_path):
    path = tmp_path / "at.txt"
    write_matrix(path, Matrix(pseudodiag_6x5().data.T))
    code, out, _ = run(capsys, "cond", path, "--pi", "1", "--side", "right", "--json")
    assert code == EXIT_OK
    assert loads_report(out)["kappa"] == pytest.approx(0.5 * np.sqrt(20 / 36), rel=1e-12)


def test_verify_pass(capsys, a3_file):
    code, out, _ = run(capsys, "verify", a3_file, "--pi", "3", "--dirs", "64", "--seed", "42", "--json")
    assert code == EXIT_OK
    probe = loads_report(out)["probe"]
    assert probe["verdict"] == "pass"
    assert probe["empirical"] == pytest.approx(70.71, rel=1e-3)
    assert len(probe["quotients"]) == 3


def test_verify_cokernel_block(capsys, a3_file):
    code, out, _ = run(capsys, "verify", a3_file, "--pi", "5,6", "--json")
    assert code == EXIT_OK
    rep = loads_report(out)
    assert rep["probe"]["empirical"] == pytest.approx(1 / 0.99, rel=1e-6)


def test_verify_worst_only(capsys, a3_file):
    code, _, _ = run(capsys, "verify", a3_file, "--pi", "3", "--dirs", "0", "--metric", "procrustes")
    assert code == EXIT_OK


def test_verify_boundary(capsys, a3_file):
    code, _, err = run(capsys, "verify", a3_file, "--pi", "5")
    assert code == EXIT_BOUNDARY and "boundary" in err


def test_verify_seed_from_env(capsys, a3_file, monkeypatch):
    monkeypatch.setenv("SUBSPACE_COND_SEED", "1234")
    _, out, _ = run(capsys, "verify", a3_file, "--pi", "1", "--dirs", "2", "--json")
    assert loads_report(out)["seed"] == 1234


def test_worst_writes_direction(capsys, a3_file, tmp_path):
    out_path = tmp_path / "w.txt"
    code, out, _ = run(capsys, "worst", a3_file, "--pi", "3,4", "--out", out_path)
    assert code == EXIT_OK
    assert "witness (4, 5)" in out
    W = read_matrix(out_path).data
    assert np.linalg.norm(W) > 0
    support = np.argwhere(W != 0)
    # witness (4, 5) with sigma_5 = 0: only the (5, 4) entry survives
    assert {tuple(x) for x in support} == {(4, 3)}


def test_worst_cokernel_pattern(capsys, a3_file, tmp_path):
    out_path = tmp_path / "w.txt"
    code, out, _ = run(capsys, "worst", a3_file, "--pi", "5,6", "--out", out_path, "--normalize")
    assert code == EXIT_OK and "norm    0.98999999999999999" in out
    W = read_matrix(out_path).data
    expected = np.zeros((6, 5))
    expected[4, 3] = -1.0
    np.testing.assert_array_equal(W, expected)


@pytest.mark.parametrize("pi", ["", "5"])
def test_worst_without_direction(capsys, a3_file, tmp_path, pi):
    code, _, _ = run(capsys, "worst", a3_file, "--pi", pi, "--out", tmp_path / "w.txt")
    assert code == EXIT_BOUNDARY
    assert not (tmp_path / "w.txt").exists()


def _write(tmp_path, name, X):
    path = tmp_path / name
    write_matrix(path, Matrix(np.asarray(X, dtype=float)))
    return path


def test_distance_identical(capsys, tmp_path):
    p = _write(tmp_path, "p.txt", [[1.0], [1.0], [0.0]])
    code, out, _ = run(capsys, "distance", p, p, "--json")
    assert code == EXIT_OK
    assert all(v == pytest.approx(0, abs=1e-7) for v in loads_report(out)["distances"].values())


def test_distance_e1_e2(capsys, tmp_path):
    p = _write(tmp_path, "p.txt", [[1.0], [0.0], [0.0]])
    q = _write(tmp_path, "q.txt", [[0.0], [1.0], [0.0]])
    code, out, _ = run(capsys, "distance", p, q, "--metric", "chordal", "--json")
    assert loads_report(out)["distances"] == {"chordal": pytest.approx(1.0)}


def test_distance_projector_input(capsys, tmp_path):
    p = _write(tmp_path, "p.txt", np.diag([1.0, 1.0, 0.0]))
    q = _write(tmp_path, "q.txt", [[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    code, out, _ = run(capsys, "distance", p, q, "--json")
    rep = loads_report(out)
    assert rep["rank"] == 2
    assert rep["distances"]["grassmann"] == pytest.approx(np.pi / 2)


def test_distance_section3_pair(capsys, tmp_path):
    e3 = np.zeros((6, 1))
    e3[2] = 1
    u = np.zeros((6, 1))
    u[2], u[3] = 9.999999999500002e-1, -9.999999998500292e-6
    code, out, _ = run(capsys, "distance", _write(tmp_path, "p.txt", e3), _write(tmp_path, "q.txt", u),
                       "--metric", "chordal", "--json")
    d = loads_report(out)["distances"]["chordal"]
    assert d == pytest.approx(9.999978209007872e-6, rel=1e-5)


def test_distance_rank_mismatch(capsys, tmp_path):
    p = _write(tmp_path, "p.txt", [[1.0], [0.0], [0.0]])
    q = _write(tmp_path, "q.txt", [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    code, _, err = run(capsys, "distance", p, q)
    assert code == EXIT_USAGE and "not comparable" in err
