import json

import pytest

from tideal.cli import main
from tideal.runner import (
    EXIT_DIAG, EXIT_INVARIANT, EXIT_OK, RunFlags, load_corpus, run, to_json, to_text,
)

EX22 = """
ring R = subring(Q; Z; [3*x, x^2, x^3])
ideal I = (3*x, x^2, x^3) in R
ideal J = (3*x, 3*x^2, x^3, x^4) in R
query treduce J I expect yes 1
query reduce J I --max-n 3 expect no_upto
query inv J
"""

STABLE = RunFlags(timing=False)


def test_report_schema():
    rep = run(EX22, STABLE)
    assert set(rep) == {"version", "queries", "diagnostics", "exit_code"}
    assert rep["exit_code"] == EXIT_OK
    q = rep["queries"][0]
    assert set(q) >= {"id", "kind", "inputs", "result", "ms"}
    assert q["result"]["kind"] == "yes" and q["result"]["n"] == 1
    assert q["result"]["certificate"]["rule"] == "witness"
    assert rep["queries"][1]["result"] == {"kind": "no_upto", "bound": 3}
    assert rep["queries"][2]["result"]["value"] == "{-1+: <1>}"


def test_reports_are_deterministic():
    assert to_json(run(EX22, STABLE)) == to_json(run(EX22, STABLE))


def test_text_and_json_agree():
    rep = run(load_corpus("ex3.8"), STABLE)
    text = to_text(rep)
    for q in rep["queries"]:
        line = next(l for l in text.splitlines() if l.startswith(f"[{q['id']}]"))
        kind = q["result"]["kind"]
        assert {"yes": "yes", "no": "no [", "no_upto": "no witness", "unknown": "unknown",
                "bool": str(q["result"].get("value")).lower(), "value": ": {"}[kind] in line


def test_failed_expectation_gives_exit_1():
    rep = run(EX22.replace("expect yes 1", "expect yes 2"), STABLE)
    assert rep["exit_code"] == EXIT_DIAG
    assert rep["queries"][0]["ok"] is False
    assert rep["diagnostics"][0]["code"] == "expectation"


def test_parse_errors_give_exit_1_and_no_queries():
    rep = run("query inv I", STABLE)
    assert rep["exit_code"] == EXIT_DIAG and rep["queries"] == []


def test_math_errors_become_diagnostics():
    rep = run("ring R = subring(Q; Z; [2*x, x^2])", STABLE)
    assert rep["exit_code"] == EXIT_DIAG
    assert "periodic" in rep["diagnostics"][0]["message"]


def test_certificate_replay_failure_gives_exit_2(monkeypatch):
    from tideal import closure
    monkeypatch.setattr(closure.ReductionYes, "verify", lambda self: False)
    rep = run(EX22, STABLE)
    assert rep["exit_code"] == EXIT_INVARIANT
    assert rep["diagnostics"][-1]["code"] == "invariant"


def test_max_n_flag_applies_to_queries_without_override():
    rep = run(EX22, RunFlags(max_n=2, timing=False))
    assert rep["queries"][0]["result"]["bound"] == 2


@pytest.mark.parametrize("name", ["ex2.2", "ex3.7", "ex3.8", "rem3.9"])
def test_corpus_scripts_pass(name):
    rep = run(load_corpus(name), STABLE)
    assert rep["exit_code"] == EXIT_OK, rep["diagnostics"]
    assert all(q.get("ok", True) for q in rep["queries"])


def test_cli_run_json(tmp_path, capsys):
    path = tmp_path / "s.tid"
    path.write_text(EX22)
    assert main(["run", str(path), "--format", "json", "--no-timing"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["version"] == "1" and len(rep["queries"]) == 3


def test_cli_corpus_text(capsys):
    assert main(["corpus", "ex3.8", "--no-timing"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "reduce I L: no [PeriodicityCert]  ok" in out and out.endswith("exit 0\n")


def test_cli_unknown_corpus(capsys):
    assert main(["corpus", "nope"]) == EXIT_DIAG


def test_cli_fmt(tmp_path, capsys):
    path = tmp_path / "s.tid"
    path.write_text(EX22)
    assert main(["fmt", str(path)]) == EXIT_OK
    assert "query reduce J I --max-n 3 expect no_upto" in capsys.readouterr().out


def test_cli_check_small(capsys):
    assert main(["check", "--count", "5", "--seed", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("pass ") == 13


def test_window_flag_limits_ring_search():
    script = "ring R = subring(Q; Z; [x^5, x^7])"
    assert run(script, RunFlags(timing=False))["exit_code"] == EXIT_OK
    assert run(script, RunFlags(window=12, timing=False))["exit_code"] == EXIT_DIAG
