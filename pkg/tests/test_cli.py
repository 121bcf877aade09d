import json
from pathlib import Path

import pytest

from lbgames.cli import parse_profile, run
from lbgames.game import prisoners_dilemma

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def lbg(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_w4(capsys):
    code, out, _ = lbg(capsys, "eval", "--game", DATA / "ia.json", "--structure", DATA / "w4.json",
                       "--state", "alpha", "--formula", "CB RAT")
    assert code == 0 and out.strip() == "true"


def test_eval_false_and_override(capsys):
    args = ["eval", "--game", DATA / "ia.json", "--structure", DATA / "w4.json", "--state", "alpha"]
    code, out, _ = lbg(capsys, *args, "--formula", "play(A,d)")
    assert code == 1 and out.strip() == "false"
    code, out, _ = lbg(capsys, *args, "--formula", "B[A] play(A,d)", "--override", "A=d")
    assert code == 0 and out.strip() == "true"


def test_eval_without_game(capsys):
    code, out, _ = lbg(capsys, "--json", "eval", "--structure", DATA / "w4.json", "--state", "beta",
                       "--formula", "B[B] play(A,c)")
    payload = json.loads(out)
    assert code == 0 and payload["value"] is True and "beta" in payload["extension"]
    code, _, err = lbg(capsys, "eval", "--structure", DATA / "w4.json", "--state", "beta",
                       "--formula", "RAT[A]")
    assert code == 1 and "game" in err


def test_nash_check(capsys):
    code, out, _ = lbg(capsys, "nash", "check", "--game", DATA / "pd.json", "--profile", "A: d=1; B: d=1")
    assert code == 0 and out.strip() == "true"
    code, out, _ = lbg(capsys, "nash", "check", "--game", DATA / "pd.json", "--profile", "A: c=1; B: d=1")
    assert code == 1 and out.strip() == "false"
    code, _, _ = lbg(capsys, "nash", "check", "--game", DATA / "pd.json", "--profile", "A: c=1/2; B: d=1")
    assert code == 2


def test_nash_find_json(capsys):
    code, out, _ = lbg(capsys, "nash", "find", "--game", "builtin:indignant_altruism", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["total"] == 9 and payload["feasible_count"] == 0
    assert payload["method"] == "exact-linear"


def test_nash_find_rejects_atoms(capsys):
    code, _, err = lbg(capsys, "nash", "find", "--game", "builtin:library_book")
    assert code == 1 and "atoms" in err


def test_rat_search_witness_reverifies(capsys, tmp_path):
    out_path = tmp_path / "witness.json"
    code, out, _ = lbg(capsys, "rat", "search", "--game", DATA / "ia.json", "--player", "B",
                       "--strategy", "c", "--max-states", "4", "--output", out_path)
    assert code == 0 and "witnessed" in out
    code, out, _ = lbg(capsys, "eval", "--game", DATA / "ia.json", "--structure", out_path,
                       "--state", "w0", "--formula", "play(B,c) and CB RAT")
    assert code == 0 and out.strip() == "true"


def test_rat_search_exhausted(capsys):
    code, out, _ = lbg(capsys, "rat", "search", "--game", DATA / "pd.json", "--player", "A",
                       "--strategy", "c", "--max-states", "3")
    assert code == 1 and "exhausted(3)" in out


def test_rat_set(capsys):
    code, out, _ = lbg(capsys, "--json", "rat", "set", "--game", "builtin:prisoners_dilemma",
                       "--max-states", "2")
    payload = json.loads(out)
    assert code == 0
    assert payload["A:d"]["verdict"] == "witnessed" and payload["A:c"]["verdict"] == "exhausted(2)"


def test_validate(capsys, tmp_path):
    code, out, _ = lbg(capsys, "validate", DATA / "ia.json", DATA / "w4.json")
    assert code == 0 and "INVALID" not in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"states": [{"id": "w1", "profile": {"A": "c", "B": "c"},
                                           "beliefs": {"A": {"w1": "9/10"}, "B": {"w1": "1"}}}]}))
    code, out, _ = lbg(capsys, "validate", bad, "--game", DATA / "pd.json")
    assert code == 1 and "P2" in out


def test_examples(capsys):
    code, out, _ = lbg(capsys, "examples", "list")
    assert code == 0 and "builtin:indignant_altruism" in out
    code, out, _ = lbg(capsys, "examples", "show", "pay_raise_guilt")
    assert code == 0 and json.loads(out)["players"] == ["A", "B"]


def test_repro_items(capsys):
    code, out, _ = lbg(capsys, "repro", "prop2", "ex4-utility8")
    assert code == 0
    assert "PASS  prop2" in out and "0 feasible supports of 9" in out and "[published]" in out
    code, out, _ = lbg(capsys, "--json", "repro", "w4")
    assert json.loads(out)[0]["basis"] == "derived"


def test_repro_all_deterministic(capsys):
    first = lbg(capsys, "--json", "repro", "--all")
    second = lbg(capsys, "--json", "repro", "--all")
    assert first == second and first[0] == 0


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["repro", "no-such-item"],
    ["eval", "--structure", "missing.json", "--state", "a", "--formula", "x"],
    ["rat", "search", "--game", "builtin:prisoners_dilemma", "--player", "A", "--strategy", "c",
     "--max-states", "0"],
    ["nash", "find", "--game", "builtin:nope"],
])
def test_usage_errors(capsys, argv):
    assert run(argv) == 2


def test_syntax_error_exit_code(capsys):
    code, _, err = lbg(capsys, "eval", "--game", DATA / "ia.json", "--structure", DATA / "w4.json",
                       "--state", "alpha", "--formula", "play(A,")
    assert code == 2 and "position" in err


def test_parse_profile():
    mu = parse_profile("A: c=1/2, d=1/2; B: d=1", prisoners_dilemma().form)
    assert mu["A"]["c"] == mu["A"]["d"] and mu["B"] == {"d": 1}


def test_examples_show_accepts_builtin_prefix(capsys):
    assert run(["examples", "show", "builtin:prisoners_dilemma"]) == 0
    assert '"prisoners_dilemma"' in capsys.readouterr().out
    assert run(["examples", "show", "nope"]) == 2
