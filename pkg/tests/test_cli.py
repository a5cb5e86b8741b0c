import json
import subprocess
import sys

import pytest

from fockcanon import cli
from fockcanon.combinatorics import enumerate_all_symbols
from fockcanon.expansion import TriangularityError

ORDERED_ROWS = "0,1,3,5;0,2,3,5;1,3,4"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_canon_level_two(capsys):
    data = run_json(capsys, "canon", "--multicharge", "1,0", "--multipartition", "[4,3,2,2],[7,3,2]")
    assert data["method"] == "lm2"
    assert data["terms"] == 4
    coeffs = sorted(json.dumps(t["coeff"]) for t in data["vector"]["terms"])
    assert len(coeffs) == 4


def test_canon_rows_match_multipartition(capsys):
    a = run(capsys, "canon", "--multicharge", "1,0", "--multipartition", "[4,3,2,2],[7,3,2]")
    b = run(capsys, "canon", "--multicharge", "1,0", "--rows", "0,1,3,5;0,2,7")
    c = run(capsys, "canon", "--multicharge", "1,0", "--rows", "...,0,1,3,5 | ...,0,2,7")
    d = run(capsys, "canon", "--multicharge", "1,0", "--rows", "0,1,3,5;0,2,7", "--window-low=-2")
    e = run(capsys, "canon", "--multicharge", "1,0", "--rows=-3,0,1,3,5;-3,0,2,7", "--window-low=-3")
    assert a == b == c == d == e
    bad = run(capsys, "canon", "--multicharge", "1,0", "--rows", "0,1,3,5;0,2,7", "--window-low=-3")
    assert bad[0] == 2


def test_canon_vacuum(capsys):
    data = run_json(capsys, "canon", "--multicharge", "2,1,1", "--multipartition", "[],[],[]")
    assert data["terms"] == 1


def test_canon_forced_ordered(capsys):
    data = run_json(capsys, "canon", "--multicharge", "2,2,1", "--rows", ORDERED_ROWS,
                    "--method", "ordered")
    assert data["method"] == "ordered" and data["terms"] == 12


def test_canon_latex_layout(capsys):
    code, out, _ = run(capsys, "canon", "--multicharge", "1,0", "--rows", "0,1,3,5;0,2,7",
                       "--format", "latex")
    assert code == 0
    assert "\\begin{pmatrix}" in out and "\\cdots & 0 & 1 & 3 & 5" in out
    assert "q^{2}" in out


def test_canon_text_is_deterministic(capsys):
    args = ("canon", "--multicharge", "2,2,1", "--rows", ORDERED_ROWS)
    assert run(capsys, *args) == run(capsys, *args)


def test_cache_does_not_change_output(capsys, tmp_path):
    args = ("canon", "--multicharge", "2,2,1", "--rows", ORDERED_ROWS, "--method", "oracle")
    plain = run(capsys, *args, "--no-cache")
    first = run(capsys, *args, "--cache", str(tmp_path))
    second = run(capsys, *args, "--cache", str(tmp_path))
    assert plain == first == second
    assert list(tmp_path.glob("*.json"))


@pytest.mark.parametrize("argv,code,kind", [
    (["canon", "--multicharge", "1,0", "--rows", "2,3;0"], 2, "bad-input"),
    (["canon", "--multicharge", "0,1", "--multipartition", "[],[]"], 2, "bad-input"),
    (["canon", "--multicharge", "1,0", "--multipartition", "[1],[2"], 2, "bad-input"),
    (["canon", "--multicharge", "1,0"], 2, "bad-input"),
    (["canon", "--multicharge", "1,0", "--multipartition", "[1],[]", "--method", "nope"], 2, "bad-input"),
    (["canon", "--multicharge", "3,3,2", "--rows", "0,1,3,5;0,1,3,5;2,3,4", "--method", "ordered"],
     3, "inapplicable"),
    (["canon", "--multicharge", "2,2,1", "--rows", ORDERED_ROWS, "--method", "lm2"], 3, "inapplicable"),
    (["verify", "--max-size", "-1"], 2, "bad-input"),
    (["verify", "--max-size", "1", "--methods", "bogus"], 2, "bad-input"),
    (["act", "--multicharge", "1,0", "--word", "G3"], 2, "bad-input"),
])
def test_error_paths(capsys, argv, code, kind):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith(f"fockcanon: error[{kind}]: ")


def test_internal_error_exit(capsys, monkeypatch):
    def boom(*a, **k):
        raise TriangularityError("triangularity violated: cycle")
    monkeypatch.setattr(cli, "canonical", boom)
    code, _, err = run(capsys, "canon", "--multicharge", "1,0", "--multipartition", "[1],[]")
    assert code == 4 and err.startswith("fockcanon: error[internal]: ")


@pytest.mark.parametrize("argv", [
    ["verify", "--multicharge", "1,0", "--max-size", "6"],
    ["verify", "--max-size", "0"],
    ["verify", "--multicharge", "2,2,1", "--max-size", "5", "--methods", "ordered,spine"],
])
def test_verify_passes(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, out + err
    assert "result: ok" in out


def test_verify_reports_mismatch(capsys, monkeypatch):
    real = cli.verify_block

    def broken(*a, **k):
        rep = real(*a, **k)
        rep["ok"] = False
        return rep
    monkeypatch.setattr(cli, "verify_block", broken)
    code, out, _ = run(capsys, "verify", "--multicharge", "1,0", "--max-size", "2")
    assert code == 1 and "result: MISMATCH" in out


def test_verify_json_is_stable(capsys, tmp_path):
    base = ("verify", "--multicharge", "2,1,0", "--max-size", "4", "--format", "json", "--no-timing")
    a = run(capsys, *base, "--jobs", "1")
    b = run(capsys, *base, "--jobs", "3", "--cache", str(tmp_path))
    assert a == b
    data = json.loads(a[1])
    assert data["ok"] and "timing" not in data
    assert [s["size"] for s in data["sizes"]] == [0, 1, 2, 3, 4]


def test_blocks_listing(capsys):
    data = run_json(capsys, "blocks", "--multicharge", "1,0", "--size", "3")
    assert sum(b["symbols"] for b in data["blocks"]) == len(enumerate_all_symbols((1, 0), 3))
    assert all(b["standard"] >= 1 for b in data["blocks"])


def test_act_monomial(capsys):
    data = run_json(capsys, "act", "--multicharge", "3,3,3", "--word", "F3^(2) F2^(2)")
    assert len(data["terms"]) == 3
    exps = sorted(t["coeff"]["lo"] for t in data["terms"])
    assert exps == [0, 1, 2]


def test_act_empty_word_is_identity(capsys, tmp_path):
    vec = run_json(capsys, "act", "--multicharge", "3,3,3", "--word", "F3^(2) F2^(2)")
    path = tmp_path / "vec.json"
    path.write_text(json.dumps(vec))
    assert run_json(capsys, "act", "--input", str(path)) == vec
    assert run_json(capsys, "act", "--input", str(path), "--word", "") == vec


def test_act_rejects_malformed_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\"multicharge\": [1, 0")
    code, _, err = run(capsys, "act", "--input", str(path))
    assert code == 2 and err.startswith("fockcanon: error[bad-input]: malformed input JSON")


def test_act_word_syntax_variants(capsys):
    a = run_json(capsys, "act", "--multicharge", "1,0", "--word", "F1 F2^(2)")
    b = run_json(capsys, "act", "--multicharge", "1,0", "--word", "F_1,F_{2}^{(2)}")
    assert a == b


def test_crystal_replay(capsys):
    data = run_json(capsys, "crystal", "--multicharge", "3,2,1", "--rows", "0,1,3,4;0,1,4;0,2",
                    "--word", "F2 F3^(2) F2 F1")
    assert data["replay_ok"] and data["word_replay_ok"]
    assert [[2, 1], [3, 2], [2, 1], [1, 1]] in data["all_good_maximal_sequences"]
    assert all(row["epsilon"] or row["phi"] for row in data["signatures"])


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fockcanon", "canon", "--multicharge", "1,0",
                           "--multipartition", "[1],[]"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "via" in proc.stdout
