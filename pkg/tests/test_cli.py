from __future__ import annotations

import json

import pytest

from mwkit import GF, evaluate, parse_expr, suites
from mwkit.cli import SCHEMA, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_normalize_symbol_one_prints_zero(capsys):
    code, out, _ = run(capsys, "normalize", "[1]", "--field", "QQ")
    assert code == 0
    assert out.strip() == "0"


def test_normalize_output_parses_back(capsys):
    F = GF(5)
    for text in ("[2] + [2]", "[2] + [3]", "eta[2]", "<2,3> - <1>", "eta<2,3,4>", "eta^2<2,2,2>"):
        code, out, _ = run(capsys, "normalize", text, "--field", "GF(5)")
        assert code == 0
        printed = out.strip()
        expected = evaluate(parse_expr(F, text))
        if printed == "0":
            assert expected.is_zero()
        else:
            assert evaluate(parse_expr(F, printed)) == expected


def test_degree_lemma_command(capsys):
    code, out, _ = run(capsys, "degree-lemma", "--n", "2", "--field", "GF(3)")
    assert code == 0
    assert "<2>" in out


def test_relation_suite_command(capsys):
    code, out, _ = run(capsys, "suite", "relations", "--field", "GF(5)", "--trials", "500", "--seed", "7")
    assert code == 0
    assert out.startswith("PASS relations")


def test_json_reports_are_schema_versioned(capsys):
    cases = [
        ["normalize", "[2,3]", "--field", "QQ"],
        ["residue", "[t]", "--field", "GF(3)(t)", "--place", "t"],
        ["specialize", "[t+2]", "--field", "GF(3)(t)", "--place", "t"],
        ["transfer", "<1>", "--field", "GF(9)"],
        ["divisor", "t^2 + 1", "--field", "GF(3)(t)", "--scheme", "P1"],
        ["reciprocity", "--trials", "5", "--field", "GF(3)"],
        ["contraction", "eta[t]", "--field", "GF(5)(t)"],
        ["corr", "check-laws", "--trials", "3", "--field", "GF(3)"],
    ]
    for argv in cases:
        code, out, _ = run(capsys, *argv, "--json")
        assert code == 0, argv
        payload = json.loads(out)
        assert payload["schema"] == SCHEMA
        assert payload["command"] == argv[0]
        assert payload["ok"] is True
        assert "result" in payload


def test_usage_errors_exit_two(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "normalize", "[1", "--field", "QQ")[0] == 2
    assert run(capsys, "normalize", "[1]", "--field", "GF(6)")[0] == 2
    assert run(capsys, "suite", "nonsense")[0] == 2
    assert run(capsys, "residue", "[t]", "--field", "GF(3)(t)", "--place", "t^2+2")[0] == 2
    assert run(capsys, "corr", "check-laws", "--field", "QQ")[0] == 2


def test_verification_failure_exits_one(capsys, monkeypatch):
    def broken(rng, trials=1, fields=None):
        res = suites.SuiteResult("relations")
        res.check(False, "deliberately false")
        return res

    monkeypatch.setitem(suites.SUITES, "relations", broken)
    code, out, _ = run(capsys, "suite", "relations", "--json")
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False


def test_corr_files_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "corr", "identity", "--field", "GF(3)", "1", "2", "--json")
    assert code == 0
    path = tmp_path / "id.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "corr", "compose", str(path), str(path), "--json")
    assert code == 0
    assert json.loads(out2)["result"] == json.loads(out)["result"]


SESSION = """\
# a small session
field GF(5)
seed 11
let A = [2] + [3]
normalize $A
normalize "eta($A)"
suite relations --trials 40
degree-lemma --n 3
corr check-laws --trials 5 --field GF(3)
"""


def test_session_replay_is_byte_identical(capsys, tmp_path):
    path = tmp_path / "session.txt"
    path.write_text(SESSION)
    code1, out1, _ = run(capsys, "@" + str(path))
    code2, out2, _ = run(capsys, "@" + str(path))
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data["schema"] == SCHEMA
    assert [entry["command"] for entry in data["session"]] == [
        "normalize",
        "normalize",
        "suite",
        "degree-lemma",
        "corr",
    ]


def test_thread_count_does_not_change_reports(capsys, monkeypatch):
    argv = ["suite", "residues", "--trials", "30", "--seed", "5", "--json"]
    monkeypatch.setenv("MWKIT_THREADS", "1")
    _, single, _ = run(capsys, *argv)
    monkeypatch.setenv("MWKIT_THREADS", "4")
    _, multi, _ = run(capsys, *argv)
    assert single == multi


@pytest.mark.parametrize("argv", [["--help"], ["suite", "--help"]])
def test_help_exits_cleanly(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
