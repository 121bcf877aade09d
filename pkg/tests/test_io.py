import json
import random

import pytest
from hypothesis import given, settings

from lbgames.game import EXAMPLE_GAMES, prisoners_dilemma
from lbgames.io import (
    SchemaError,
    StructureInvalidError,
    game_from_dict,
    game_to_dict,
    load_game,
    load_structure,
    structure_from_dict,
    structure_to_dict,
)
from lbgames.kripke import validate_structure
from lbgames.lang import VocabularyError
from lbgames.repro import w4_structure

from _gen import random_form, random_structure, seeds

PD_FILE = {
    "name": "pd",
    "players": ["A", "B"],
    "strategies": {"A": ["c", "d"], "B": ["c", "d"]},
    "payoffs": {"(c,c)": ["3", "3"], "(c,d)": ["0", "5"], "(d,c)": ["5", "0"], "(d,d)": ["1", "1"]},
}


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def test_payoff_shorthand(tmp_path):
    game = load_game(write(tmp_path, "pd.json", PD_FILE))
    ref = prisoners_dilemma()
    assert game.form == ref.form
    assert game.utility == ref.utility


def test_unknown_strategy_in_guard():
    data = {"players": ["A"], "strategies": {"A": ["x", "y"]},
            "utilities": {"A": [{"guard": "play(A,z)", "value": "1"}]}}
    with pytest.raises(SchemaError) as err:
        game_from_dict(data)
    assert err.value.path == "$.utilities.A[0].guard"
    assert isinstance(err.value.__context__, VocabularyError) or "z" in str(err.value)


def test_schema_errors_carry_paths():
    bad = dict(PD_FILE, strategies={"A": ["c", "d"], "B": []})
    with pytest.raises(SchemaError) as err:
        game_from_dict(bad)
    assert err.value.path == "$.strategies.B"
    bad = dict(PD_FILE, payoffs={"(c,c)": [3.5, "3"]})
    with pytest.raises(SchemaError) as err:
        game_from_dict(bad)
    assert err.value.path.startswith("$.payoffs")


def test_missing_payoff_profile():
    bad = dict(PD_FILE, payoffs={"(c,c)": ["3", "3"]})
    with pytest.raises(SchemaError):
        game_from_dict(bad)


def test_structure_p2_error(tmp_path):
    data = {"states": [{"id": "w1", "profile": {"A": "c", "B": "c"}, "atoms": [],
                        "beliefs": {"A": {"w1": "9/10"}, "B": {"w1": "1"}}}]}
    with pytest.raises(StructureInvalidError) as err:
        load_structure(write(tmp_path, "s.json", data), prisoners_dilemma().form)
    assert "P2" in str(err.value) and "w1" in str(err.value)


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    with pytest.raises(SchemaError):
        load_game(path)


def test_builtin_games():
    assert load_game("builtin:prisoners_dilemma").form == prisoners_dilemma().form
    with pytest.raises(SchemaError):
        load_game("builtin:nope")


@pytest.mark.parametrize("name", list(EXAMPLE_GAMES))
def test_game_round_trip(name):
    game = EXAMPLE_GAMES[name]()
    back = game_from_dict(json.loads(json.dumps(game_to_dict(game))))
    assert back.form == game.form
    assert back.utility == game.utility


def test_w4_round_trip(tmp_path):
    M = w4_structure()
    back = load_structure(write(tmp_path, "w4.json", structure_to_dict(M)), prisoners_dilemma().form)
    assert back == M


@settings(max_examples=100, deadline=None)
@given(seed=seeds)
def test_structure_round_trip(seed):
    rng = random.Random(seed)
    form = random_form(rng)
    M = random_structure(rng, form)
    back = structure_from_dict(json.loads(json.dumps(structure_to_dict(M))), form)
    assert back == M
    assert validate_structure(back, form).ok
