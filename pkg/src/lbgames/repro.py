"""Built-in reproduction items: each rebuilds an example in-process and
compares an observed value to a compiled-in expectation.

Each item has a basis: ``published`` values are taken as given,
``derived`` values come from an independent hand or brute-force analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .checker import ModelChecker, counterfactual_utility
from .game import (
    EXAMPLE_GAMES,
    GameForm,
    deep_surprise,
    indignant_altruism,
    library_book,
    pay_raise,
    price_cell_atom,
    prisoners_dilemma,
    roadtrip,
    surprise_proposal,
)
from .kripke import GammaStructure, State, point_structure, validate_structure
from .lang import CommonBelief, rat_all
from .solve import find_nash, rationalizable_set, search_rationalizable

__all__ = [
    "ReproResult",
    "REPRO_ITEMS",
    "run_repro",
    "w4_structure",
    "surprise_witness_structure",
    "pay_raise_point",
    "single_state",
]


@dataclass
class ReproResult:
    item: str
    basis: str
    description: str
    expected: str
    observed: str

    @property
    def passed(self) -> bool:
        return self.expected == self.observed


def w4_structure() -> GammaStructure:
    """Four-state structure for indignant altruism where RAT holds everywhere.

    Each player is sure of their own strategy and believes the opponent
    expects them to do the opposite of what they do.
    """
    form = indignant_altruism().form
    ids = ["alpha", "beta", "gamma", "delta"]
    profiles = [("c", "c"), ("d", "d"), ("c", "d"), ("d", "c")]
    b_A = [0, 1, 0, 1]  # alpha->alpha, beta->beta, gamma->alpha, delta->beta
    b_B = [3, 2, 2, 3]  # alpha->delta, beta->gamma, gamma->gamma, delta->delta
    return point_structure(form, profiles, {"A": b_A, "B": b_B}, ids=ids)


def surprise_witness_structure(form: Optional[GameForm] = None) -> GammaStructure:
    """Four states on which Bob rationally proposes at some and holds back at others."""
    form = form or surprise_proposal().form
    only = form.strategies["A"][0]
    ids = ["w3", "w4", "w5", "w6"]
    profiles = [(only, "q"), (only, "p"), (only, "p"), (only, "q")]
    b_A = [1, 1, 3, 3]
    b_B = [0, 2, 2, 0]
    return point_structure(form, profiles, {"A": b_A, "B": b_B}, ids=ids)


def pay_raise_point(form: GameForm, k: int, possible_raises: Sequence[int]) -> GammaStructure:
    """Alice grants ``s{k}``; Bob spreads his belief uniformly over ``possible_raises``.

    The actual state is ``"actual"``; the states Bob considers are ``x{r}``.
    """
    raises = sorted(set(possible_raises))
    w = Fraction(1, len(raises))
    bob_row = {f"x{r}": w for r in raises}
    only = form.strategies["B"][0]
    states = []
    if k not in raises:
        states.append(State("actual", {"A": f"s{k}", "B": only}, frozenset(),
                            {"A": {"actual": 1}, "B": dict(bob_row)}))
    for r in raises:
        sid = f"x{r}"
        states.append(State(sid, {"A": f"s{r}", "B": only}, frozenset(),
                            {"A": {sid: 1}, "B": dict(bob_row)}))
    M = GammaStructure(states, form.players)
    return M


def _actual_id(M: GammaStructure, k: int) -> str:
    return "actual" if "actual" in M.index else f"x{k}"


def single_state(form: GameForm, profile: Sequence[str], atoms=()) -> GammaStructure:
    return point_structure(form, [tuple(profile)], {p: [0] for p in form.players},
                           [frozenset(atoms)])


# -- items ---------------------------------------------------------------------

def _prop2():
    r = find_nash(indignant_altruism())
    return "0 feasible supports of 9", r.summary()


def _prop3():
    game = indignant_altruism()
    results = rationalizable_set(game, max_states=4)
    witnessed = sum(w.found for w in results.values())
    return "4 of 4 strategies witnessed", f"{witnessed} of {len(results)} strategies witnessed"


def _w4():
    game = indignant_altruism()
    M = w4_structure()
    ok = validate_structure(M, game.form).ok
    mc = ModelChecker(M, game)
    cb = mc.ids_of(mc.ext(CommonBelief(rat_all(game.players))))
    return "valid, CB RAT at 4 of 4 states", f"{'valid' if ok else 'invalid'}, CB RAT at {len(cb)} of {len(M)} states"


def _pd_nash():
    r = find_nash(prisoners_dilemma())
    return "[A:{d} B:{d}]", "[" + ", ".join(
        " ".join(f"{p}:{{{','.join(s)}}}" for p, s in zip(("A", "B"), v.support))
        for v in r.feasible) + "]"


def _pd_rat():
    game = prisoners_dilemma()
    parts = []
    for p in game.players:
        parts.append(f"{p}:d {search_rationalizable(game, p, 'd', 1).verdict}")
        parts.append(f"{p}:c {search_rationalizable(game, p, 'c', 4).verdict}")
    return ("A:d witnessed, A:c exhausted(4), B:d witnessed, B:c exhausted(4)",
            ", ".join(parts))


def _surprise_nash():
    return "0 feasible supports of 3", find_nash(surprise_proposal()).summary()


def _surprise_rat():
    game = surprise_proposal()
    verdicts = [search_rationalizable(game, "B", s, 6).verdict for s in ("p", "q")]
    return "p witnessed, q witnessed", f"p {verdicts[0]}, q {verdicts[1]}"


def _deep(K):
    def item():
        game = deep_surprise(K)
        found = [s for s in game.form.strategies["B"]
                 if search_rationalizable(game, "B", s, 8).found]
        return "Bob has a witnessed strategy", (
            "Bob has a witnessed strategy" if found else "no witnessed strategy for Bob")
    return item


def _utility8():
    game = pay_raise("absolute", n_steps=6)
    M = pay_raise_point(game.form, 5, [2, 3, 5])
    value = counterfactual_utility(game, M, _actual_id(M, 5), "B", "only")
    return "8", str(value)


def _guilt():
    game = pay_raise("guilt", n_steps=6)
    bad = []
    for k in range(6):
        for r in range(k + 1, 6):
            M = pay_raise_point(game.form, k, [r, 5])
            value = counterfactual_utility(game, M, _actual_id(M, k), "A", f"s{k}")
            if value != -25:
                bad.append((k, r, value))
    return "-25 for all k < r", "-25 for all k < r" if not bad else f"mismatch {bad}"


def _library():
    game = library_book()
    form = game.form
    values = [
        counterfactual_utility(game, single_state(form, ["return"]), "w0", "A", "return"),
        counterfactual_utility(game, single_state(form, ["wait"], ["tomorrow"]), "w0", "A", "wait"),
        counterfactual_utility(game, single_state(form, ["wait"]), "w0", "A", "wait"),
    ]
    return "-1, 1, -5", ", ".join(str(v) for v in values)


def _roadtrip():
    game = roadtrip()
    from .game import DEFAULT_ROADTRIP_PARTITION as part
    a = price_cell_atom(part, 20000)
    b = price_cell_atom(part, 20050)
    ua = counterfactual_utility(game, single_state(game.form, ["buy"], [a]), "w0", "A", "buy")
    ub = counterfactual_utility(game, single_state(game.form, ["buy"], [b]), "w0", "A", "buy")
    return "equal", "equal" if ua == ub and a == b else f"{ua} vs {ub}"


def _thm1():
    missing = []
    for name, make in EXAMPLE_GAMES.items():
        game = make()
        for p in game.players:
            # iterative deepening: stop at the smallest witness for any strategy
            if not any(search_rationalizable(game, p, s, size).found
                       for size in range(1, 9) for s in game.form.strategies[p]):
                missing.append(f"{name}:{p}")
    return "every player has a witnessed strategy", (
        "every player has a witnessed strategy" if not missing else f"none for {missing}")


REPRO_ITEMS: Dict[str, tuple] = {
    "prop2": ("published", "no Nash equilibrium in indignant altruism", _prop2),
    "prop3": ("published", "every indignant-altruism strategy is rationalizable", _prop3),
    "w4": ("derived", "reference witness structure satisfies CB RAT everywhere", _w4),
    "pd-nash": ("derived", "classical prisoner's dilemma equilibrium supports", _pd_nash),
    "pd-rat": ("derived", "classical prisoner's dilemma rationalizability", _pd_rat),
    "surprise-nash": ("derived", "surprise proposal has no Nash equilibrium", _surprise_nash),
    "surprise-rat": ("derived", "both of Bob's surprise-proposal strategies rationalizable", _surprise_rat),
    "deep-surprise-k0": ("derived", "truncated deep surprise (K=0) has a rationalizable strategy", _deep(0)),
    "deep-surprise-k1": ("derived", "truncated deep surprise (K=1) has a rationalizable strategy", _deep(1)),
    "ex4-utility8": ("published", "pay raise, k=5 and r=2, Bob's utility", _utility8),
    "ex4-guilt": ("published", "pay raise guilt variant when undershooting", _guilt),
    "ex6-library": ("published", "library book utilities", _library),
    "ex5-roadtrip": ("published", "coarse prices 20000 and 20050 are indistinguishable", _roadtrip),
    "thm1": ("published", "empirical check: every example game has rationalizable strategies", _thm1),
}


def run_repro(selectors: Optional[Sequence[str]] = None) -> List[ReproResult]:
    names = list(REPRO_ITEMS) if not selectors else list(selectors)
    unknown = [n for n in names if n not in REPRO_ITEMS]
    if unknown:
        raise KeyError(f"unknown repro items {unknown}")
    results = []
    for name in names:
        basis, description, fn = REPRO_ITEMS[name]
        expected, observed = fn()
        results.append(ReproResult(name, basis, description, expected, observed))
    return results
