import json

import pytest

from convlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_stdout_and_cache(capsys, tmp_path):
    code, out, _ = run(capsys, "expand", "--terms", "10", "--cache", str(tmp_path))
    assert code == 0
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[0]["terms"] == 10 and lines[0]["minpoly"] == ["-2", "0", "0", "1"]
    assert [r["a"] for r in lines[1:]] == ["1", "3", "1", "5", "1", "1", "4", "1", "1", "8", "1"]
    assert len(list(tmp_path.iterdir())) == 2


def test_expand_uses_env_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CONVLAB_CACHE", str(tmp_path))
    assert run(capsys, "expand", "--terms", "5")[0] == 0
    assert len(list(tmp_path.iterdir())) == 2


def test_expand_to_file(capsys, tmp_path):
    out = tmp_path / "e.jsonl"
    assert run(capsys, "expand", "--minpoly", "-1,-1,1", "--terms", "5", "--out", str(out))[0] == 0
    recs = [json.loads(x) for x in out.read_text().splitlines()[1:]]
    assert [r["q"] for r in recs] == ["1", "1", "2", "3", "5", "8"]


def test_quad(capsys):
    code, out, _ = run(capsys, "quad", "--p", "0", "--q", "1", "--d", "3")
    d = json.loads(out)
    assert code == 0 and (d["r"], d["s"], d["t"], d["identity_holds"]) == (1, 2, "4", True)


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--coeffs", "2,3,-8,4", "--init", "1,10,3,36")
    d = json.loads(out)
    assert code == 0 and d["L"] == 2 and d["degenerate"] is True
    assert d["branch_admissible"] == [True, False]


@pytest.mark.parametrize("kind,extra", [
    ("approx", ["--max-n", "30"]),
    ("sharpness", ["--minpoly", "-1,-1,0,1", "--max-n", "40"]),
    ("intersect", ["--bound", "1000000"]),
    ("spart", ["--max-k", "20", "--primes", "2,3,5"]),
    ("spart", ["--max-k", "20", "--mu", "none"]),
    ("digits", ["--max-k", "20", "--base", "2"]),
    ("divisor", ["--max-k", "20", "--variant", "lowdc0"]),
])
def test_scans(capsys, kind, extra):
    code, out, _ = run(capsys, "scan", kind, *extra)
    assert code == 0
    recs = [json.loads(x) for x in out.splitlines()]
    assert recs and all("verdict" in r for r in recs)


def test_scan_csv_and_jobs(capsys, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(capsys, "scan", "approx", "--max-n", "60", "--csv", "--out", str(a))[0] == 0
    assert run(capsys, "scan", "approx", "--max-n", "60", "--csv", "--jobs", "2", "--out", str(b))[0] == 0
    assert a.read_text() == b.read_text()
    assert a.read_text().startswith("experiment,index,verdict,precision")


def test_em_build_and_verify(capsys, tmp_path):
    w = tmp_path / "w.json"
    assert run(capsys, "em", "build", "--depth", "2", "--seed", "7", "--out", str(w))[0] == 0
    code, out, _ = run(capsys, "em", "verify", "--witness", str(w))
    assert code == 0 and json.loads(out)["passed"]
    data = json.loads(w.read_text())
    u = int(data["stages"][1]["u"], 16)
    data["stages"][1]["u"] = hex(u + 1)
    w.write_text(json.dumps(data))
    code, out, err = run(capsys, "em", "verify", "--witness", str(w))
    assert code == 4 and not json.loads(out)["passed"]


def test_em_verify_unreadable_witness(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "em", "verify", "--witness", str(p))[0] == 2
    assert run(capsys, "em", "verify", "--witness", str(tmp_path / "missing.json"))[0] == 2


def test_alt_build(capsys):
    code, out, _ = run(capsys, "alt", "build", "--steps", "3")
    d = json.loads(out)
    assert code == 0 and [s["exponent"] for s in d["steps"]] == ["3", "3", "21"]
    assert run(capsys, "alt", "build", "--steps", "5")[0] == 3


@pytest.mark.parametrize("argv", [
    ["expand", "--minpoly", "-4,0,1", "--iso-lo", "1", "--iso-hi", "3", "--terms", "3"],
    ["expand", "--minpoly", "1,x", "--terms", "3"],
    ["expand", "--iso-lo", "2", "--iso-hi", "3", "--terms", "3"],
    ["classify", "--coeffs", "1,0", "--init", "1,1"],
    ["scan", "sharpness", "--minpoly", "-2,0,0,1"],
    ["scan", "divisor", "--epsilon", "1/0"],
    ["em", "build", "--s-primes", "2", "--t-primes", "5"],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("convlab:")


def test_precision_exhausted_exit_code(capsys):
    assert run(capsys, "expand", "--terms", "500", "--precision-cap", "256")[0] == 3
