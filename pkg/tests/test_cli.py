import io
import json
import subprocess
import sys

import pytest

from raidgraph.cli import run_cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def star3(tmp_path):
    p = tmp_path / "star3.edges"
    p.write_text("4 3\n0 1\n0 2\n0 3\n")
    return str(p)


def test_derange_none(star3):
    code, out, _ = run("derange", "--graph", star3)
    assert code == 0
    assert out == "no derangement\nhall witness: W={1,2,3} N(W)={0}\n"


def test_derange_found(tmp_path):
    js = tmp_path / "d.json"
    code, out, _ = run("derange", "--family", "cycle", "--size", "4", "--json", str(js))
    assert code == 0 and out.startswith("derangement\n")
    doc = json.loads(js.read_text())
    assert doc["exists"] and sorted(doc["map"]) == [0, 1, 2, 3]


def test_count():
    code, out, _ = run("count", "--family", "complete", "--size", "4")
    assert (code, out) == (0, "derangements: 9\nupper bound: 9\n")


def test_theorem(tmp_path):
    js = tmp_path / "r.json"
    code, out, _ = run("theorem", "--family", "cycle", "--size", "4", "--h", "0,0.5,0.9", "--json", str(js))
    assert code == 0
    assert out == "EQUIVALENCE HOLDS; derangements=4; strict NE=4 at each h\n"
    doc = json.loads(js.read_text())
    assert doc["h_values"] == ["0", "1/2", "9/10"]
    assert doc["ne_count"] == [4, 4, 4] and doc["set_equal"] == [True, True, True]
    assert doc["violations"] == [] and doc["derangement_exists"]


def test_theorem_boundary():
    code, out, _ = run("theorem", "--family", "complete", "--size", "2", "--h", "1")
    assert code == 0 and "boundary" in out


def test_hall_and_qfactor_and_parse(star3, tmp_path):
    assert run("hall", "--graph", star3)[1] == "hall condition fails: W={1,2,3} N(W)={0}\n"
    assert run("hall", "--family", "cycle", "--size", "5")[1] == "hall condition holds\n"
    prof = tmp_path / "p.txt"
    prof.write_text("0 1\n1 0\n2 3\n3 2\n4 5\n5 4\n")
    assert run("qfactor", "--family", "cycle", "--size", "6", "--profile", str(prof))[1] == (
        "pair 0 1\npair 2 3\npair 4 5\n"
    )
    assert run("qfactor", "--graph", star3)[1] == "no derangement\n"
    code, out, _ = run("parse-check", "--graph", star3)
    assert code == 0 and out.startswith("ok n=4 m=3 connected=yes\n")


def test_payoffs_and_nash_verify(tmp_path):
    prof = tmp_path / "p.json"
    prof.write_text(json.dumps({"map": [1, 1, 1]}))
    code, out, _ = run("payoffs", "--family", "path", "--size", "3", "--profile", str(prof), "--h", "0,1/2")
    assert code == 0
    assert out == "h=0: 4/3 1/3 4/3\nh=1/2: 7/6 2/3 7/6\n"
    code, out, _ = run("nash-verify", "--family", "path", "--size", "3", "--profile", str(prof), "--h", "0")
    assert code == 1 and "not strict" in out
    swap = tmp_path / "swap.txt"
    swap.write_text("0 1\n1 0\n")
    code, out, _ = run("nash-verify", "--family", "complete", "--size", "2", "--profile", str(swap), "--h", "0.3")
    assert (code, out) == (0, "h=3/10: strict NE\n")


def test_nash_enumerate():
    code, out, _ = run("nash-enumerate", "--family", "cycle", "--size", "3", "--h", "0")
    assert code == 0
    assert out == "h=0: 2 strict NE\n  1 2 0\n  2 0 1\n"


def test_learn(tmp_path):
    log, js = tmp_path / "log.csv", tmp_path / "r.json"
    args = ["learn", "--family", "complete", "--size", "2", "--seed", "1", "--rounds", "5000",
            "--log", str(log), "--json", str(js)]
    code, out, _ = run(*args)
    assert code == 0 and out.startswith("certified strict NE: 1 0\n")
    doc = json.loads(js.read_text())
    assert doc == {"converged": True, "certified": True, "profile": [1, 0], "rounds_used": 754, "seed": 1}
    assert log.read_text().splitlines()[0] == "round,player,action,probability,payoff"


def test_generate():
    assert run("generate", "--family", "path", "--size", "3")[1] == "3 2\n0 1\n1 2\n"
    assert run("generate", "--random", "6", "--p", "0.5", "--seed", "42")[1] == (
        "6 6\n0 2\n0 5\n1 5\n2 3\n2 4\n4 5\n"
    )


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["count"],
        ["learn", "--family", "complete", "--size", "2"],  # missing --seed
        ["count", "--family", "cycle", "--size", "2"],
        ["count", "--graph", "/nonexistent/file"],
        ["theorem", "--family", "star", "--size", "3", "--h", "2"],
        ["theorem", "--family", "complete", "--size", "9"],  # enumeration guard
        ["nash-enumerate", "--family", "path", "--size", "1"],
        ["payoffs", "--family", "path", "--size", "3"],  # missing profile
        ["generate", "--random", "5"],
    ],
)
def test_usage_errors(argv):
    code, _, _ = run(*argv)
    assert code == 2


def test_bad_graph_file(tmp_path):
    p = tmp_path / "bad.edges"
    p.write_text("2 1\n0 0\n")
    code, _, err = run("derange", "--graph", str(p))
    assert code == 2 and "line 2" in err and "self-loop" in err


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "raidgraph", "count", "--family", "cycle", "--size", "4"],
        capture_output=True, text=True, check=True,
    )
    assert res.stdout == "derangements: 4\nupper bound: 9\n"
