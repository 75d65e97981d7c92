import csv
import io

import pytest

from nfskit import cli, polyselect


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def toy_poly(tmp_path, capsys):
    path = tmp_path / "toy.poly"
    code, _, _ = run(capsys, "polyselect", "--method", "conj", "--p", "10567", "--n", "2",
                     "--out", str(path))
    assert code == 0
    return path


def test_polyselect_cubic_golden(capsys):
    code, out, _ = run(capsys, "polyselect", "--method", "conj", "--p", "2147483659", "--n", "3")
    assert code == 0
    assert out.startswith("# seed: 0\n")
    assert "f: 1,7,14,3,-6,-1,1" in out
    assert "g: -20413,-28609,32630,20413" in out


def test_polyselect_file_readable(toy_poly):
    pair = polyselect.read_poly_file(toy_poly)
    assert pair.f == (1, 0, 0, 0, 1) and pair.g == (86, 65, 86)


def test_polyselect_other_methods(capsys):
    code, out, _ = run(capsys, "polyselect", "--method", "jlsv1", "--p", "1000003", "--n", "2")
    assert code == 0 and "method: jlsv1" in out
    code, _, err = run(capsys, "polyselect", "--method", "gjl", "--p", "1000003", "--n", "2")
    assert code == 1 and err.startswith("error:")


def test_score(toy_poly, capsys):
    code, out, _ = run(capsys, "score", "--poly", str(toy_poly))
    assert code == 0
    assert {line.split(" = ")[0] for line in out.splitlines()} == {"alpha(f)", "alpha(g)", "E"}


def test_score_improve(toy_poly, tmp_path, capsys):
    out_path = tmp_path / "better.poly"
    code, out, _ = run(capsys, "--threads", "2", "score", "--poly", str(toy_poly), "--improve",
                       "--bound", "5", "--out", str(out_path))
    assert code == 0 and "g = " in out and out_path.exists()


def test_complexity_default(capsys):
    code, out, _ = run(capsys, "complexity")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("GJL 1.9229994")
    assert lines[1].startswith("CONJ_MEDIUM 2.2012848")
    assert "t=2" in lines[2]


def test_complexity_curves(tmp_path, capsys):
    path = tmp_path / "curves.csv"
    assert run(capsys, "complexity", "--curves", "--out", str(path))[0] == 0
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == ["cp", "t", "c", "method"] and len(rows) > 500


def test_complexity_report(tmp_path, capsys):
    code, out, _ = run(capsys, "complexity", "--report", str(tmp_path / "rep"))
    assert code == 0
    names = sorted(p.name for p in (tmp_path / "rep").iterdir())
    assert "complexity.png" in names and "norms_n2.csv" in names and len(names) == 12
    assert (tmp_path / "rep" / "norms_n3.png").read_bytes()[:4] == b"\x89PNG"


def test_dlog_verified(toy_poly, tmp_path, capsys):
    code, out, _ = run(capsys, "--seed", "3", "dlog", "--poly", str(toy_poly), "--B", "600",
                       "--E", "400", "--targets", "3", "--verify-oracle", "--out",
                       str(tmp_path / "d"))
    assert code == 0, out
    assert "seed = 3" in out and "ell = 1321" in out
    assert out.count(" ok") == 3 and "all targets verified" in out
    assert (tmp_path / "d" / "relations.txt").exists()
    assert (tmp_path / "d" / "logs.txt").exists()


def test_dlog_deterministic(toy_poly, tmp_path, capsys):
    outs = []
    for k in range(2):
        d = tmp_path / f"d{k}"
        code, out, _ = run(capsys, "dlog", "--poly", str(toy_poly), "--B", "600", "--E", "400",
                           "--target", "5,7", "--out", str(d))
        assert code == 0
        outs.append((out, (d / "relations.txt").read_bytes(), (d / "logs.txt").read_bytes()))
    assert outs[0] == outs[1]


def test_dlog_bad_ell(toy_poly, capsys):
    code, _, err = run(capsys, "dlog", "--poly", str(toy_poly), "--ell", "1320", "--B", "600",
                       "--E", "400")
    assert code == 1 and "error" in err


def test_schirokauer(capsys):
    code, out, _ = run(capsys, "schirokauer", "--f", "1,0,0,0,1", "--ell", "13", "--eval", "1")
    assert code == 0
    assert "epsilon = 168" in out and "1: 0" in out
    code, _, err = run(capsys, "schirokauer", "--f", "1,0,0,0,1", "--ell", "15")
    assert code == 1


def test_galois(toy_poly, tmp_path, capsys):
    path = tmp_path / "orbits.csv"
    code, out, _ = run(capsys, "galois", "--poly", str(toy_poly), "--orbits", str(path),
                       "--B", "20")
    assert code == 0 and "kappa 1" in out
    rows = list(csv.reader(io.StringIO(path.read_text())))
    assert rows[0] == ["side", "q", "r", "orbit_id", "power"]
    assert ["F", "17", "2", "1", "0"] in rows and ["F", "17", "9", "1", "1"] in rows


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.run(["--threads", "0", "complexity"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.run(["score", "--poly", "x", "--unknown"])
    assert exc.value.code == 2


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "score", "--poly", str(tmp_path / "none.poly"))
    assert code == 1 and err.startswith("error:")


def test_threads_env(monkeypatch, toy_poly, capsys):
    monkeypatch.setenv("NFSKIT_THREADS", "two")
    code, _, err = run(capsys, "score", "--poly", str(toy_poly), "--improve", "--bound", "3")
    assert code == 1 and "NFSKIT_THREADS" in err
