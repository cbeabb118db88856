import json

import pytest

from efbounds.cli import main, read_table


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_json(capsys):
    code, out, _ = run(capsys, "solve", 15, 10, 6, "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["complete"] and doc["bound"] == "exact"
    assert doc["best"][0]["poly"] == "q^18+q^5+1"
    assert doc["best"][0]["clique"] == [8463, 16880, 32256]
    assert doc["instance"]["ub_source"] == "tabulated"


def test_solve_fixed_q_value(capsys):
    code, out, _ = run(capsys, "solve", 10, 4, 5, "--q", "2", "--format", "json")
    assert code == 0 and json.loads(out)["value"] == 1167355


def test_solve_output_is_stable(capsys):
    a = run(capsys, "solve", 8, 8, 4)[1]
    b = run(capsys, "solve", 8, 8, 4)[1]
    assert a == b and "q^4+1" in a


@pytest.mark.parametrize("q", ["all", "3..", "2..4", "2"])
def test_table_round_trip(capsys, q):
    js = json.loads(run(capsys, "solve", 8, 4, 4, "--q", q, "--format", "json")[1])
    tab = read_table(run(capsys, "solve", 8, 4, 4, "--q", q)[1])
    assert tab == js


def test_other_tables_round_trip(capsys):
    for argv in (["spread", 19, 9], ["histogram", 14, 8, 5], ["diagram", "--pivot", 1256, "--n", 12, "--delta", 3]):
        js = json.loads(run(capsys, *argv, "--format", "json")[1])
        assert read_table(run(capsys, *argv)[1]) == js


def test_truncated_run_exits_3(capsys):
    code, out, _ = run(capsys, "solve", 14, 6, 4, "--budget", "0")
    assert code == 3 and "lower bound only" in out


def test_usage_errors(capsys):
    assert run(capsys, "solve", 8, 5, 4)[0] == 2
    assert run(capsys, "solve", 8, 10, 4)[0] == 2
    code, _, err = run(capsys, "solve", 5, 4, 3)
    assert code == 2 and "--ub" in err
    assert run(capsys, "solve", 5, 4, 3, "--ub", "johnson")[0] == 0
    assert run(capsys, "solve", 8, 4, 4, "--q", "1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_seed_front(capsys, tmp_path):
    path = tmp_path / "front.json"
    assert run(capsys, "solve", 9, 6, 4, "--format", "json", "--out", path)[0] == 0
    code, out, _ = run(capsys, "solve", 9, 6, 4, "--seed-front", path, "--format", "json")
    assert code == 0
    assert json.loads(out)["best"] == json.loads(path.read_text())["best"]


def test_diagram(capsys):
    doc = json.loads(run(capsys, "diagram", "--pivot", 1256, "--n", 12, "--delta", 3, "--format", "json")[1])
    assert doc["rows"] == [6, 4, 4, 4, 3]
    assert doc["upper_exponent"] == 11 and doc["witness_dimension"] == 10
    assert doc["witness_theorem"] == "from_subcodes"


def test_spread_and_histogram(capsys):
    assert "q^10+1" in run(capsys, "spread", 19, 9)[1]
    hist = json.loads(run(capsys, "histogram", 14, 8, 5, "--format", "json")[1])
    assert sum(r["vertices"] for r in hist["counts"]) == 2002


def test_ilp(capsys, tmp_path):
    path = tmp_path / "m.lp"
    code, _, err = run(capsys, "ilp", 4, 4, 2, "--solve", "--out", path)
    assert code == 0 and "Maximize" in path.read_text()
    assert "optimum 2" in err


def test_verify_tier0(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "n=15,d=10")
    assert code == 0 and "pass" in out
