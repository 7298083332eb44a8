import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from qjoin.cli import main
from qjoin.combinatorics import is_compatible, is_multiplicity_matrix_for
from qjoin.model import DecisionReport, MultiplicityMatrix, SizeTuple


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, input=None):
        return runner.invoke(main, [str(a) for a in args], input=input)

    return invoke


def test_decide_q3(run):
    res = run("decide", "2,2", "1,1,1")
    assert res.exit_code == 0 and res.output.startswith("q=3")


def test_decide_witness(run):
    res = run("decide", "2,2", "1,1", "--json")
    assert res.exit_code == 0
    rep = DecisionReport.from_json(json.loads(res.output))
    V, W = rep.witness
    assert rep.q == 2
    assert is_multiplicity_matrix_for(V, (2, 2)) and is_multiplicity_matrix_for(W, (1, 1)) and is_compatible(V, W)
    res = run("decide", "2,2", "1,1", "--witness")
    assert res.output.startswith("q=2") and "V =" in res.output and "W =" in res.output


def test_decide_mu(run):
    res = run("decide", "5", "2,1,1", "--mu")
    assert res.exit_code == 0 and res.output.startswith("q=2 mu=3 iplus=[3,6]")


@pytest.mark.parametrize("bad", ["2,x", "0,1", "", "2,,2", "-1"])
def test_parse_errors(run, bad):
    assert run("decide", bad, "1").exit_code == 2


def test_realize_k2(run):
    res = run("realize", "1", "1", "--seed", "7")
    assert res.exit_code == 0
    obj = json.loads(res.output)
    X = np.array(obj["matrix"]["data"])
    assert X.shape == (2, 2) and obj["verification"]["passed"]
    assert obj["verification"]["residual"] <= 1e-9
    res = run("realize", "1", "1", "--format", "text")
    assert res.exit_code == 0 and "passed=True" in res.output


def test_realize_to_file_then_verify(run, tmp_path):
    out = tmp_path / "x.json"
    res = run("realize", "2,2", "1,1", "--seed", "1", "--out", out)
    assert res.exit_code == 0 and out.exists() and "passed=True" in res.output
    assert run("verify", out).exit_code == 0
    assert run("verify", out, "2,2", "1,1").exit_code == 0
    # same numbers against the wrong graph
    assert run("verify", out, "3,1", "1,1").exit_code == 1


def test_realize_q3(run):
    res = run("realize", "2,2", "1,1,1")
    assert res.exit_code == 3


def test_realize_lambda(run):
    res = run("realize", "2,2", "1,1,1,1", "--lambda", "-0.2,0.4")
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["lambda"] == [-1.0, -0.2, 0.4, 1.0]
    assert run("realize", "2,2", "1,1,1,1", "--lambda", "0.4,-0.2").exit_code == 2
    assert run("realize", "2,2", "1,1,1,1", "--lambda", "abc").exit_code == 2


def test_realize_inconclusive(run):
    # a residual tolerance no float computation meets
    res = run("realize", "3,3", "3,3", "--tol", "1e-30", "--retries", "2")
    assert res.exit_code == 4


def test_verify_cycles_fixture(run, tmp_path):
    path = tmp_path / "cycles.json"
    assert run("fixture", "cycles", "--out", path).exit_code == 0
    res = run("verify", path)
    assert res.exit_code == 0 and json.loads(res.output)["passed"]

    obj = json.loads(path.read_text())
    obj["matrix"]["data"][0][9] = obj["matrix"]["data"][9][0] = 0.0
    path.write_text(json.dumps(obj))
    res = run("verify", path)
    assert res.exit_code == 1
    assert "violation: (0,9) missing-edge" in res.output


def test_verify_identity(run, tmp_path):
    path = tmp_path / "eye.json"
    path.write_text(json.dumps({"n": 4, "data": np.eye(4).tolist()}))
    res = run("verify", path, "2", "1,1")
    assert res.exit_code == 1
    assert not json.loads(res.output.splitlines()[0])["pattern_ok"]
    assert run("verify", path).exit_code == 2


def test_rank_two_star_fixture(run, tmp_path):
    path = tmp_path / "star.json"
    run("fixture", "rank-two-star", "--out", path)
    res = run("verify", path)
    rep = json.loads(res.output.splitlines()[0])
    assert res.exit_code == 1 and rep["pattern_ok"] and not rep["orthogonal"]


def test_crosscheck_small(run):
    res = run("crosscheck", "--limit", "2")
    assert res.exit_code == 0 and json.loads(res.output)["cells"] == 9


def test_crosscheck_csv_and_cache(run, tmp_path, monkeypatch):
    monkeypatch.setenv("QJOIN_CACHE", str(tmp_path / "env-cache.jsonl"))
    out = tmp_path / "cells.csv"
    res = run("crosscheck", "--limit", "4", "--csv", out)
    assert res.exit_code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 121 and all(r["agree"] == "true" for r in rows)
    assert len((tmp_path / "env-cache.jsonl").read_text().splitlines()) == 121
    res = run("crosscheck", "--limit", "4", "--cache", tmp_path / "c.jsonl", "--no-mu")
    assert res.exit_code == 0


def test_crosscheck_limit_6(run):
    res = run("crosscheck", "--limit", "6")
    assert res.exit_code == 0 and json.loads(res.output)["counterexamples"] == []


def test_crosscheck_bad_limit(run):
    assert run("crosscheck", "--limit", "1").exit_code == 2


def test_batch(run):
    lines = [{"m": [2, 2], "n": [1, 1, 1]}, {"m": [2, 2], "n": [1, 1]}, {"m": [2, 2], "n": [1, 1, 1, 1]}]
    res = run("batch", input="".join(json.dumps(x) + "\n" for x in lines))
    assert res.exit_code == 0
    out = [json.loads(x) for x in res.output.splitlines()]
    assert [x["q"] for x in out] == [3, 2, 2]


def test_batch_empty(run):
    res = run("batch", input="")
    assert res.exit_code == 0 and res.output == ""


def test_batch_malformed(run, tmp_path):
    src = tmp_path / "in.jsonl"
    dst = tmp_path / "out.jsonl"
    src.write_text('{"m": [1], "n": [1]}\nnot json\n{"m": [0], "n": [1]}\n\n{"n": [1]}\n{"m": [2,2], "n": [1,1,1]}\n')
    res = run("batch", "--in", src, "--out", dst)
    assert res.exit_code == 5
    out = [json.loads(x) for x in dst.read_text().splitlines()]
    assert len(out) == 6
    assert [x.get("q") for x in out] == [2, None, None, None, None, 3]
    assert [x.get("line") for x in out if "error" in x] == [2, 3, 4, 5]


def test_table_discrete(run):
    res = run("table", "--example", "discrete", "--params", "s=2,a=1..4,b=1..8")
    assert res.exit_code == 0 and "mismatches=0" in res.output
    res = run("table", "--example", "discrete", "--params", "s=3,a=2,b=1..10")
    row = [line for line in res.output.splitlines() if line.startswith("3 2 |")][0]
    qs = [int(x) for x in row.split("|")[1].split()]
    assert [b for b, q in zip(range(1, 11), qs) if q == 2] == [2, 3, 4, 5, 6]


def test_table_km_connected(run):
    res = run("table", "--example", "km-connected", "--params", "m=4,l=1..6")
    assert res.exit_code == 0 and "mismatches=0" in res.output
    rows = [line.split("|")[1].split() for line in res.output.splitlines()[1:-1]]
    assert [int(r[0]) for r in rows] == [2, 2, 2, 2, 3, 3]


def test_table_bad_params(run):
    assert run("table", "--example", "discrete", "--params", "s=x").exit_code == 2
