import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from lbgames.checker import counterfactual_utility
from lbgames.game import (
    DEFAULT_ROADTRIP_PARTITION,
    EXAMPLE_GAMES,
    SINGLETON,
    Game,
    GameError,
    GameForm,
    UtilityGuard,
    FiniteUtilitySpec,
    as_fraction,
    compile_classical,
    deep_surprise,
    indignant_altruism,
    interval_atom,
    library_book,
    pay_raise,
    price_cell_atom,
    prisoners_dilemma,
    roadtrip,
    surprise_proposal,
)
from lbgames.kripke import point_structure
from lbgames.lang import CommonBelief, Play, Rat, modal_depth, play_profile
from lbgames.repro import pay_raise_point, single_state

from _gen import random_structure, seeds


def u(game, M, sid, player, strategy=None):
    strategy = strategy or M[sid].profile[player]
    return counterfactual_utility(game, M, sid, player, strategy)


# -- classical ---------------------------------------------------------------------

def test_pd_guards():
    game = prisoners_dilemma()
    spec_a = game.utility["A"].guards
    cc = [g for g in spec_a if g.guard == play_profile(game.players, ("c", "c"))]
    assert cc and cc[0].value == 3
    M = single_state(game.form, ("d", "c"))
    assert u(game, M, "w0", "A") == 5 and u(game, M, "w0", "B") == 0


def test_one_player_constant():
    form = GameForm(("A",), {"A": ("only",)})
    game = compile_classical(form, {("only",): (0,)})
    assert len(game.utility["A"].guards) == 1
    assert game.utility["A"].guards[0].value == 0


def test_classical_errors():
    form = GameForm(("A", "B"), {"A": ("c", "d"), "B": ("c", "d")})
    with pytest.raises(GameError):
        compile_classical(form, {("c", "c"): (1, 1)})
    with pytest.raises(GameError):
        compile_classical(GameForm(("A",), {"A": ("x",)}, ("t",)), {("x",): (0,)})


def test_guards_must_be_cb_and_rat_free():
    form = GameForm(("A",), {"A": ("x", "y")})
    for bad in (Rat("A"), CommonBelief(Play("A", "x"))):
        with pytest.raises(GameError):
            Game(form, {"A": FiniteUtilitySpec([UtilityGuard(bad, 1)])})


def test_as_fraction():
    assert as_fraction("-3/4") == Fraction(-3, 4)
    assert as_fraction(" 7 ") == 7
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(GameError):
        as_fraction("half")


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_classical_counterfactual_matches_table(seed):
    rng = random.Random(seed)
    form = GameForm(("A", "B"), {"A": ("c", "d", "e")[:rng.randint(1, 3)],
                                 "B": ("c", "d")[:rng.randint(1, 2)]})
    payoffs = {prof: (rng.randint(-3, 3), rng.randint(-3, 3)) for prof in form.profiles()}
    game = compile_classical(form, payoffs)
    M = random_structure(rng, form)
    for st in M.states:
        for i, p in enumerate(form.players):
            for s in form.strategies[p]:
                prof = tuple(s if q == p else st.profile[q] for q in form.players)
                assert u(game, M, st.id, p, s) == payoffs[prof][i]


# -- surprise proposal -----------------------------------------------------------

def _surprise(bob_plays, alice_support_plays):
    """State 0 is the actual one; Alice is sure of states whose Bob-strategies are given."""
    form = surprise_proposal().form
    profiles = [(SINGLETON, bob_plays)] + [(SINGLETON, b) for b in alice_support_plays]
    n = len(profiles)
    # beliefs: Alice spreads over states 1..n-1; support states believe in themselves
    from lbgames.kripke import GammaStructure, State
    ids = [f"w{k}" for k in range(n)]
    alice_row = {ids[k]: Fraction(1, n - 1) for k in range(1, n)}
    states = []
    for k in range(n):
        states.append(State(ids[k], dict(zip(form.players, profiles[k])), frozenset(),
                            {"A": dict(alice_row), "B": {ids[k]: 1}}))
    return GammaStructure(states, form.players)


def test_surprise_table():
    game = surprise_proposal()
    assert u(game, _surprise("p", ["p"]), "w0", "B") == 0
    assert u(game, _surprise("p", ["p", "q"]), "w0", "B") == 1
    assert u(game, _surprise("q", ["q"]), "w0", "B") == 0
    assert u(game, _surprise("q", ["p"]), "w0", "B") == 1
    assert u(game, _surprise("q", ["p"]), "w0", "A") == 0


# -- indignant altruism ---------------------------------------------------------------

def test_indignant_altruism_examples():
    game = indignant_altruism()
    form = game.form
    # (d,d) and Bob sure Alice defects
    M = point_structure(form, [("d", "d")], {"A": [0], "B": [0]})
    assert u(game, M, "w0", "A") == -1
    M = point_structure(form, [("c", "c")], {"A": [0], "B": [0]})
    assert u(game, M, "w0", "A") == 3
    # (d,c) with Bob sure Alice cooperates
    M = point_structure(form, [("d", "c"), ("c", "c")], {"A": [0, 1], "B": [1, 1]})
    assert u(game, M, "w0", "A") == 5


# -- deep surprise --------------------------------------------------------------------

def test_deep_surprise_k0():
    game = deep_surprise(0)
    form = game.form
    # Bob p, Alice sure of q: not P_A play(B,p)
    M = point_structure(form, [(SINGLETON, "p"), (SINGLETON, "q")], {"A": [1, 1], "B": [0, 1]})
    assert u(game, M, "w0", "B") == 1
    # Bob q, Alice considers p possible
    M = point_structure(form, [(SINGLETON, "q"), (SINGLETON, "p")], {"A": [1, 1], "B": [0, 1]})
    assert u(game, M, "w0", "B") == 1
    # Bob p, Alice considers p possible
    M = point_structure(form, [(SINGLETON, "p")], {"A": [0], "B": [0]})
    assert u(game, M, "w0", "B") == 0


@pytest.mark.parametrize("K", [0, 1, 2])
def test_deep_surprise_depth(K):
    game = deep_surprise(K)
    assert max(modal_depth(g.guard) for g in game.utility["B"].guards) == 2 * K + 1


# -- pay raise ------------------------------------------------------------------------

def test_pay_raise_utility_8():
    game = pay_raise("absolute", n_steps=6)
    M = pay_raise_point(game.form, 5, [2, 3, 5])
    assert u(game, M, "x5", "B") == 8


@pytest.mark.parametrize("k", range(6))
def test_pay_raise_k_equals_r(k):
    game = pay_raise("absolute", n_steps=6)
    M = pay_raise_point(game.form, k, [k])
    assert u(game, M, f"x{k}", "B") == k
    assert u(game, M, f"x{k}", "A") == 0


def test_pay_raise_identity():
    game = pay_raise("absolute", n_steps=5)
    for k in range(5):
        for r in range(5):
            M = pay_raise_point(game.form, k, [r, 4])
            sid = "actual" if "actual" in M.index else f"x{k}"
            assert u(game, M, sid, "B") == 2 * k - min(r, 4)
            assert u(game, M, sid, "A") == -abs(k - min(r, 4))


def test_pay_raise_guilt():
    game = pay_raise("guilt", n_steps=6)
    for k in range(6):
        for r in range(k + 1, 6):
            M = pay_raise_point(game.form, k, [r])
            assert u(game, M, "actual", "A") == -25


def test_pay_raise_loss_aversion_and_empathy():
    game = pay_raise("absolute", alpha=2, beta=3, n_steps=6)
    M = pay_raise_point(game.form, 1, [3])
    assert u(game, M, "actual", "B") == 1 + 3 * (1 - 3)
    M = pay_raise_point(game.form, 4, [1])
    assert u(game, M, "actual", "B") == 4 + 2 * 3
    emp = pay_raise("empathetic", delta=Fraction(1, 2), n_steps=6)
    M = pay_raise_point(emp.form, 4, [1])
    assert u(emp, M, "actual", "A") == 7 - 2


def test_pay_raise_bad_parameters():
    with pytest.raises(GameError):
        pay_raise(n_steps=0)
    with pytest.raises(GameError):
        pay_raise("envious")


# -- library book and roadtrip -------------------------------------------------------

def test_library_book():
    game = library_book()
    form = game.form
    assert u(game, single_state(form, ["return"]), "w0", "A") == -1
    assert u(game, single_state(form, ["wait"], ["tomorrow"]), "w0", "A") == 1
    assert u(game, single_state(form, ["wait"]), "w0", "A") == -5
    assert u(game, single_state(form, ["remind"], ["tomorrow"]), "w0", "A") == 1


def test_roadtrip():
    game = roadtrip()
    cell = interval_atom(290, 300)
    M = single_state(game.form, ["buy"], [cell])
    assert u(game, M, "w0", "A") == -290
    assert price_cell_atom(DEFAULT_ROADTRIP_PARTITION, 295) == cell
    a = price_cell_atom(DEFAULT_ROADTRIP_PARTITION, 20000)
    b = price_cell_atom(DEFAULT_ROADTRIP_PARTITION, 20050)
    assert a == b
    with pytest.raises(GameError):
        roadtrip([(0, 10), (5, 20)])


def test_every_example_builds():
    for name, make in EXAMPLE_GAMES.items():
        game = make()
        assert isinstance(game, Game)
        assert set(game.utility) == set(game.players)
