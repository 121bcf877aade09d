"""Game forms, finitely specified utilities and the example games.

A utility is a list of ``(guard, value)`` pairs.  At any evaluation point
exactly one guard is supposed to hold; the checker enforces this when it
evaluates, not here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Tuple

from .lang import (
    And,
    Believes,
    Formula,
    Not,
    Play,
    Prop,
    check_vocabulary,
    conj,
    contains_cb,
    contains_rat,
    disj,
    parse_formula,
    play_profile,
    possible,
)

__all__ = [
    "GameError",
    "GameForm",
    "UtilityGuard",
    "FiniteUtilitySpec",
    "Game",
    "as_fraction",
    "compile_classical",
    "constant_utility",
    "prisoners_dilemma",
    "surprise_proposal",
    "indignant_altruism",
    "deep_surprise",
    "pay_raise",
    "library_book",
    "roadtrip",
    "price_cell_atom",
    "interval_atom",
    "SINGLETON",
    "EXAMPLE_GAMES",
]

#: name of the only strategy of a player without a real choice
SINGLETON = "only"


class GameError(ValueError):
    pass


def as_fraction(value) -> Fraction:
    """Exact rational from int, Fraction or a ``"p/q"`` / integer string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not utilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise GameError(f"not a rational: {value!r}") from None
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True, eq=False)
class GameForm:
    players: Tuple[str, ...]
    strategies: Mapping[str, Tuple[str, ...]]
    extra_atoms: Tuple[str, ...] = ()

    def __post_init__(self):
        players = tuple(self.players)
        strategies = {p: tuple(self.strategies.get(p, ())) for p in players}
        atoms = tuple(self.extra_atoms)
        object.__setattr__(self, "players", players)
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "extra_atoms", atoms)
        if not players:
            raise GameError("a game form needs at least one player")
        if len(set(players)) != len(players):
            raise GameError("duplicate player names")
        for p in players:
            if not p:
                raise GameError("empty player name")
            ss = strategies[p]
            if not ss:
                raise GameError(f"player {p!r} has no strategies")
            if len(set(ss)) != len(ss) or not all(ss):
                raise GameError(f"strategy names of {p!r} must be nonempty and unique")
        extra = set(self.strategies) - set(players)
        if extra:
            raise GameError(f"strategies given for unknown players {sorted(extra)}")
        if len(set(atoms)) != len(atoms) or not all(atoms):
            raise GameError("extra atoms must be nonempty and unique")

    def __eq__(self, other):
        if not isinstance(other, GameForm):
            return NotImplemented
        return (self.players == other.players
                and self.strategies == other.strategies
                and self.extra_atoms == other.extra_atoms)

    __hash__ = None

    def profiles(self):
        """All strategy profiles, in lexicographic order of the strategy lists."""
        return itertools.product(*(self.strategies[p] for p in self.players))

    def parse(self, text: str) -> Formula:
        return parse_formula(text, self)


@dataclass(frozen=True)
class UtilityGuard:
    guard: Formula
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))


@dataclass(frozen=True)
class FiniteUtilitySpec:
    guards: Tuple[UtilityGuard, ...]

    def __post_init__(self):
        guards = tuple(self.guards)
        object.__setattr__(self, "guards", guards)
        if not guards:
            raise GameError("a utility spec needs at least one guard")


@dataclass(frozen=True, eq=False)
class Game:
    form: GameForm
    utility: Mapping[str, FiniteUtilitySpec]
    name: str = ""

    def __post_init__(self):
        utility = dict(self.utility)
        object.__setattr__(self, "utility", utility)
        missing = [p for p in self.form.players if p not in utility]
        if missing:
            raise GameError(f"no utility for players {missing}")
        unknown = set(utility) - set(self.form.players)
        if unknown:
            raise GameError(f"utility for unknown players {sorted(unknown)}")
        for p, spec in utility.items():
            for g in spec.guards:
                if contains_cb(g.guard) or contains_rat(g.guard):
                    raise GameError(
                        f"utility guards must be CB-free and RAT-free (player {p!r})")
                check_vocabulary(g.guard, self.form)

    @property
    def players(self):
        return self.form.players


def _tautology(form: GameForm) -> Formula:
    p = form.players[0]
    atom = Play(p, form.strategies[p][0])
    return Not(And(atom, Not(atom)))


def constant_utility(form: GameForm, value=0) -> FiniteUtilitySpec:
    """A single always-true guard."""
    return FiniteUtilitySpec((UtilityGuard(_tautology(form), value),))


def compile_classical(form: GameForm, payoffs: Mapping, name: str = "") -> Game:
    """Classical normal-form game as a language-based game.

    ``payoffs`` maps each strategy profile (a tuple in player order) to the
    per-player payoffs, in player order.
    """
    if form.extra_atoms:
        raise GameError("classical games cannot have extra atoms")
    table = {}
    for key, values in payoffs.items():
        profile = tuple(key)
        values = list(values)
        if len(values) != len(form.players):
            raise GameError(f"payoff for {profile} has {len(values)} entries")
        table[profile] = [as_fraction(v) for v in values]
    guards = {p: [] for p in form.players}
    for profile in form.profiles():
        if profile not in table:
            raise GameError(f"missing payoff for profile {profile}")
        atom = play_profile(form.players, profile)
        for idx, p in enumerate(form.players):
            guards[p].append(UtilityGuard(atom, table[profile][idx]))
    extra = set(table) - set(form.profiles())
    if extra:
        raise GameError(f"payoffs for unknown profiles {sorted(extra)}")
    return Game(form, {p: FiniteUtilitySpec(g) for p, g in guards.items()}, name)


PD_PAYOFFS = {
    ("c", "c"): (3, 3),
    ("c", "d"): (0, 5),
    ("d", "c"): (5, 0),
    ("d", "d"): (1, 1),
}


def prisoners_dilemma() -> Game:
    form = GameForm(("A", "B"), {"A": ("c", "d"), "B": ("c", "d")})
    return compile_classical(form, PD_PAYOFFS, name="prisoners_dilemma")


def surprise_proposal() -> Game:
    """Bob (p = propose, q = not) wants Alice not to expect the proposal."""
    form = GameForm(("A", "B"), {"A": (SINGLETON,), "B": ("p", "q")})
    p, q = Play("B", "p"), Play("B", "q")
    expects = Believes("A", p)
    bob = FiniteUtilitySpec((
        UtilityGuard(And(p, expects), 0),
        UtilityGuard(And(p, Not(expects)), 1),
        UtilityGuard(And(q, expects), 1),
        UtilityGuard(And(q, Not(expects)), 0),
    ))
    return Game(form, {"A": constant_utility(form), "B": bob}, name="surprise_proposal")


def _indignant_guards(me: str, other: str) -> FiniteUtilitySpec:
    # (mine, theirs) -> classical payoff for "me"
    classical = {("c", "c"): 3, ("c", "d"): 0, ("d", "c"): 5, ("d", "d"): 1}
    defect = Play(me, "d")
    suspected = Believes(other, defect)
    return FiniteUtilitySpec((
        UtilityGuard(And(defect, suspected), -1),
        UtilityGuard(conj([defect, Not(suspected), Play(other, "c")]), classical["d", "c"]),
        UtilityGuard(conj([defect, Not(suspected), Play(other, "d")]), classical["d", "d"]),
        UtilityGuard(And(Play(me, "c"), Play(other, "c")), classical["c", "c"]),
        UtilityGuard(And(Play(me, "c"), Play(other, "d")), classical["c", "d"]),
    ))


def indignant_altruism() -> Game:
    """Prisoner's dilemma where defecting against an opponent sure of it pays -1."""
    form = GameForm(("A", "B"), {"A": ("c", "d"), "B": ("c", "d")})
    return Game(form, {"A": _indignant_guards("A", "B"),
                       "B": _indignant_guards("B", "A")},
                name="indignant_altruism")


def suspicion_formula(k: int) -> Formula:
    """``P[A] (P[B] P[A])^k play(B,p)``."""
    f: Formula = Play("B", "p")
    for _ in range(k):
        f = possible("B", possible("A", f))
    return possible("A", f)


def deep_surprise(K: int) -> Game:
    """Deeply surprising proposal with suspicion nested to depth ``K``.

    The untruncated game quantifies over every k; only k <= K is kept.
    """
    if K < 0:
        raise GameError("K must be nonnegative")
    form = GameForm(("A", "B"), {"A": (SINGLETON,), "B": ("p", "q")})
    suspicions = [suspicion_formula(k) for k in range(K + 1)]
    surprised = And(Play("B", "p"), conj(Not(s) for s in suspicions))
    held_back = And(Play("B", "q"), disj(suspicions))
    bob = FiniteUtilitySpec((
        UtilityGuard(surprised, 1),
        UtilityGuard(held_back, 1),
        UtilityGuard(Not(disj([surprised, held_back])), 0),
    ))
    return Game(form, {"A": constant_utility(form), "B": bob}, name=f"deep_surprise_{K}")


def _raise_strategy(k: int) -> str:
    return f"s{k}"


def pay_raise(alice_variant: str = "absolute", alpha=1, beta=1, delta=0,
              n_steps: int = 6) -> Game:
    """Alice picks a raise ``s0 .. s{n_steps-1}``; Bob's reference point is the
    lowest raise he considers possible.

    Bob gets ``k + f(k - r)`` where ``f(x)`` is ``alpha*x`` for ``x >= 0`` and
    ``beta*x`` otherwise.  Alice's utility by variant:

    ``absolute``     ``-|k - r|``
    ``guilt``        ``-25`` if ``k < r``, ``r - k`` if ``r <= k < R``,
                     ``r - R + 2(R - k)`` if ``k >= R``, with ``R`` the highest
                     raise Bob considers possible
    ``empathetic``   Bob's utility minus ``delta * k``
    """
    if n_steps < 1:
        raise GameError("n_steps must be at least 1")
    if alice_variant not in ("absolute", "guilt", "empathetic"):
        raise GameError(f"unknown Alice variant {alice_variant!r}")
    alpha, beta, delta = as_fraction(alpha), as_fraction(beta), as_fraction(delta)
    raises = [_raise_strategy(k) for k in range(n_steps)]
    form = GameForm(("A", "B"), {"A": tuple(raises), "B": (SINGLETON,)})
    maybe = [possible("B", Play("A", s)) for s in raises]

    def lowest_is(r):
        return [maybe[r]] + [Not(maybe[j]) for j in range(r)]

    def highest_is(R):
        return [maybe[R]] + [Not(maybe[j]) for j in range(R + 1, n_steps)]

    def f(x):
        return alpha * x if x >= 0 else beta * x

    def bob_value(k, r):
        return k + f(k - r)

    bob, alice = [], []
    for k in range(n_steps):
        for r in range(n_steps):
            guard = conj([Play("A", raises[k])] + lowest_is(r))
            bob.append(UtilityGuard(guard, bob_value(k, r)))
            if alice_variant == "absolute":
                alice.append(UtilityGuard(guard, -abs(k - r)))
            elif alice_variant == "empathetic":
                alice.append(UtilityGuard(guard, bob_value(k, r) - delta * k))
            else:
                for R in range(r, n_steps):
                    parts = [Play("A", raises[k])] + lowest_is(r)
                    parts += highest_is(R)[1:] if R == r else highest_is(R)
                    if k < r:
                        value = -25
                    elif k < R:
                        value = r - k
                    else:
                        value = r - R + 2 * (R - k)
                    alice.append(UtilityGuard(conj(parts), value))
    return Game(form, {"A": FiniteUtilitySpec(alice), "B": FiniteUtilitySpec(bob)},
                name=f"pay_raise_{alice_variant}")


def library_book() -> Game:
    """Return the book today, or wait (or remind yourself) and count on tomorrow."""
    form = GameForm(("A",), {"A": ("return", "wait", "remind")}, ("tomorrow",))
    keeps = disj([Play("A", "wait"), Play("A", "remind")])
    counts_on_it = Believes("A", Prop("tomorrow"))
    alice = FiniteUtilitySpec((
        UtilityGuard(Play("A", "return"), -1),
        UtilityGuard(And(keeps, counts_on_it), 1),
        UtilityGuard(And(keeps, Not(counts_on_it)), -5),
    ))
    return Game(form, {"A": alice}, name="library_book")


def _fmt_bound(x: Fraction) -> str:
    text = str(x)
    return text.replace("/", "_").replace("-", "m")


def interval_atom(lo, hi) -> str:
    """Atom name for the price cell ``[lo, hi)``."""
    return f"p_{_fmt_bound(as_fraction(lo))}_{_fmt_bound(as_fraction(hi))}"


def _normalize_partition(partition):
    cells = [(as_fraction(lo), as_fraction(hi)) for lo, hi in partition]
    for lo, hi in cells:
        if not lo < hi:
            raise GameError(f"empty price interval [{lo}, {hi})")
    for (lo1, hi1), (lo2, hi2) in zip(cells, cells[1:]):
        if lo2 < hi1:
            raise GameError(f"overlapping or unordered intervals [{lo1}, {hi1}) and [{lo2}, {hi2})")
    return cells


def price_cell_atom(partition, price) -> str:
    """The atom describing ``price`` under ``partition``."""
    price = as_fraction(price)
    for lo, hi in _normalize_partition(partition):
        if lo <= price < hi:
            return interval_atom(lo, hi)
    raise GameError(f"price {price} lies outside the partition")


DEFAULT_ROADTRIP_PARTITION = (
    (280, 290), (290, 300), (300, 310),
    (19500, 20000), (20000, 20500),
)


def roadtrip(partition: Sequence = DEFAULT_ROADTRIP_PARTITION,
             preferences: Optional[Mapping] = None) -> Game:
    """Single buyer whose language only sees which price cell applies.

    ``preferences`` maps each ``(lo, hi)`` cell to a utility; by default the
    utility is minus the lower end of the cell.
    """
    cells = _normalize_partition(partition)
    if preferences is None:
        prefs = {cell: -cell[0] for cell in cells}
    else:
        prefs = {(as_fraction(lo), as_fraction(hi)): as_fraction(v)
                 for (lo, hi), v in preferences.items()}
        missing = [c for c in cells if c not in prefs]
        if missing:
            raise GameError(f"no preference for cells {missing}")
    atoms = [interval_atom(lo, hi) for lo, hi in cells]
    form = GameForm(("A",), {"A": ("buy",)}, tuple(atoms))
    guards = []
    for cell, atom in zip(cells, atoms):
        others = [Not(Prop(a)) for a in atoms if a != atom]
        guards.append(UtilityGuard(conj([Prop(atom)] + others), prefs[cell]))
    return Game(form, {"A": FiniteUtilitySpec(guards)}, name="roadtrip")


EXAMPLE_GAMES = {
    "prisoners_dilemma": prisoners_dilemma,
    "surprise_proposal": surprise_proposal,
    "indignant_altruism": indignant_altruism,
    "deep_surprise_0": lambda: deep_surprise(0),
    "deep_surprise_1": lambda: deep_surprise(1),
    "pay_raise_absolute": lambda: pay_raise("absolute"),
    "pay_raise_guilt": lambda: pay_raise("guilt"),
    "pay_raise_empathetic": lambda: pay_raise("empathetic", delta=Fraction(1, 2)),
    "library_book": library_book,
    "roadtrip": roadtrip,
}
