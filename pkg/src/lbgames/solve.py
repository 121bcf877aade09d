"""Nash equilibrium and rationalizability for language-based games.

Nash: a mixed profile is an equilibrium iff RAT holds at every state of its
characteristic structure.  Truth values of formulas in that structure only
depend on the supports, so for each support profile the utilities are fixed
numbers and the RAT conditions are linear in the opponent's probabilities
(two players).  Each support is then an exact LP: maximize the smallest
supported probability; the support is feasible iff the optimum is positive.

Rationalizability: search finite point-belief structures for a state where
``play(i, s) and CB RAT`` holds.  A witness proves rationalizability; running
out of structures proves nothing.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .checker import GuardPartitionError, ModelChecker
from .game import Game
from .kripke import (
    GammaStructure,
    build_characteristic_structure,
    enumerate_rooted_point_structures,
    validate_structure,
)
from .lang import And, CommonBelief, Play, rat_all
from .lp import maximize

__all__ = [
    "SolveError",
    "SupportVerdict",
    "NashReport",
    "RatWitness",
    "is_nash",
    "find_nash",
    "support_profiles",
    "check_rationalizable_witness",
    "search_rationalizable",
    "rationalizable_set",
    "DEFAULT_MAX_STATES",
    "DEFAULT_DENOMINATOR_BOUND",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 6
DEFAULT_DENOMINATOR_BOUND = 8


class SolveError(ValueError):
    pass


@dataclass
class SupportVerdict:
    support: Tuple[Tuple[str, ...], ...]
    feasible: bool
    sample: Optional[Dict[str, Dict[str, Fraction]]] = None


@dataclass
class NashReport:
    game: str
    method: str  # "exact-linear" or "grid"
    verdicts: List[SupportVerdict]
    denominator_bound: Optional[int] = None

    @property
    def complete(self) -> bool:
        return self.method == "exact-linear"

    @property
    def feasible(self) -> List[SupportVerdict]:
        return [v for v in self.verdicts if v.feasible]

    def summary(self) -> str:
        return f"{len(self.feasible)} feasible supports of {len(self.verdicts)}"


@dataclass
class RatWitness:
    player: str
    strategy: str
    max_states: int
    structure: Optional[GammaStructure] = None
    state: Optional[str] = None
    examined: int = 0
    skipped: int = 0

    @property
    def found(self) -> bool:
        return self.structure is not None

    @property
    def verdict(self) -> str:
        return "witnessed" if self.found else f"exhausted({self.max_states})"


def _no_atoms(game: Game):
    if game.form.extra_atoms:
        raise SolveError("Nash analysis is defined for games without extra atoms")


def is_nash(game: Game, mu) -> bool:
    """RAT at every state of the characteristic structure of ``mu``."""
    _no_atoms(game)
    M = build_characteristic_structure(game.form, mu)
    mc = ModelChecker(M, game)
    return all(mc.rat_mask(p) == mc.full for p in game.players)


def _subsets(items):
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def support_profiles(form) -> List[Tuple[Tuple[str, ...], ...]]:
    """All support profiles, smaller supports first for each player."""
    return list(itertools.product(*(list(_subsets(form.strategies[p])) for p in form.players)))


def _uniform_on(form, support):
    return {p: {s: Fraction(1, len(sup)) for s in sup}
            for p, sup in zip(form.players, support)}


class _SupportTables:
    """Utilities in the characteristic structure of one support profile."""

    def __init__(self, game: Game, support):
        self.game = game
        self.support = support
        form = game.form
        self.M = build_characteristic_structure(form, _uniform_on(form, support))
        mc = ModelChecker(self.M, game)
        self.profiles = [tuple(st.profile[p] for p in form.players) for st in self.M.states]
        # uhat[i][s'][k]
        self.uhat = []
        for i, p in enumerate(form.players):
            if len(form.strategies[p]) == 1:
                self.uhat.append(None)
                continue
            self.uhat.append({s: [mc.uhat(p, s, k) for k in range(len(self.profiles))]
                              for s in form.strategies[p]})

    def rat_holds(self, mu) -> bool:
        form = self.game.form
        for i, p in enumerate(form.players):
            table = self.uhat[i]
            if table is None:
                continue
            for own in self.support[i]:
                eu = {}
                for s, values in table.items():
                    total = Fraction(0)
                    for k, prof in enumerate(self.profiles):
                        if prof[i] != own:
                            continue
                        w = Fraction(1)
                        for j, q in enumerate(form.players):
                            if j != i:
                                w *= mu[q][prof[j]]
                        total += values[k] * w
                    eu[s] = total
                if eu[own] < max(eu.values()):
                    return False
        return True


def _solve_linear(tables: _SupportTables) -> Optional[Dict[str, Dict[str, Fraction]]]:
    """Exact LP for at most two players; returns a sample profile or None."""
    form = tables.game.form
    players = form.players
    var = {}
    for i, p in enumerate(players):
        for s in tables.support[i]:
            var[p, s] = len(var)
    t_col = len(var)
    width = t_col + 1
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i, p in enumerate(players):
        table = tables.uhat[i]
        if table is None:
            continue
        for own in tables.support[i]:
            for alt in form.strategies[p]:
                if alt == own:
                    continue
                row = [Fraction(0)] * width
                const = Fraction(0)
                for k, prof in enumerate(tables.profiles):
                    if prof[i] != own:
                        continue
                    gain = table[alt][k] - table[own][k]
                    others = [(q, prof[j]) for j, q in enumerate(players) if j != i]
                    if not others:
                        const += gain
                    else:
                        (q, s), = others
                        row[var[q, s]] += gain
                if not any(row):
                    if const > 0:
                        return None
                    continue
                A_ub.append(row)
                b_ub.append(-const)
    for (p, s), col in var.items():
        row = [Fraction(0)] * width
        row[t_col] = Fraction(1)
        row[col] = Fraction(-1)
        A_ub.append(row)
        b_ub.append(Fraction(0))
    for i, p in enumerate(players):
        row = [Fraction(0)] * width
        for s in tables.support[i]:
            row[var[p, s]] = Fraction(1)
        A_eq.append(row)
        b_eq.append(Fraction(1))
    c = [Fraction(0)] * width
    c[t_col] = Fraction(1)
    result = maximize(c, A_ub, b_ub, A_eq, b_eq)
    if result.status != "optimal" or result.value <= 0:
        return None
    x = result.x
    return {p: {s: (x[var[p, s]] if (p, s) in var else Fraction(0))
                for s in form.strategies[p]}
            for p in players}


def _grid_rows(support, D):
    seen = set()
    rows = []
    size = len(support)
    for d in range(size, D + 1):
        for cuts in itertools.combinations(range(1, d), size - 1):
            parts = [b - a for a, b in zip((0,) + cuts, cuts + (d,))]
            row = tuple(Fraction(x, d) for x in parts)
            if row not in seen:
                seen.add(row)
                rows.append(row)
    return sorted(rows)


def _solve_grid(tables: _SupportTables, D: int):
    form = tables.game.form
    per_player = [_grid_rows(sup, D) for sup in tables.support]
    for combo in itertools.product(*per_player):
        mu = {p: dict(zip(sup, row)) for p, sup, row in zip(form.players, tables.support, combo)}
        if tables.rat_holds(mu):
            return {p: {s: mu[p].get(s, Fraction(0)) for s in form.strategies[p]}
                    for p in form.players}
    return None


def find_nash(game: Game, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND) -> NashReport:
    """Decide every support profile.

    With at most two players the verdicts are exact and complete.  With
    more, each support is searched on the grid of probabilities with
    denominators up to ``denominator_bound`` and ``infeasible`` only means
    no grid point works.
    """
    _no_atoms(game)
    form = game.form
    exact = len(form.players) <= 2
    verdicts = []
    for support in support_profiles(form):
        tables = _SupportTables(game, support)
        sample = _solve_linear(tables) if exact else _solve_grid(tables, denominator_bound)
        if sample is not None and not is_nash(game, sample):
            raise SolveError(f"internal error: sample profile for {support} is not an equilibrium")
        verdicts.append(SupportVerdict(support, sample is not None, sample))
    return NashReport(game.name, "exact-linear" if exact else "grid", verdicts,
                      None if exact else denominator_bound)


# -- rationalizability -----------------------------------------------------------

def _rat_everywhere_from(mc: ModelChecker, k: int, players) -> bool:
    """Every state reachable from ``k`` in one or more steps satisfies RAT."""
    reach = mc.reach()[k]
    j = 0
    while reach:
        if reach & 1:
            for p in players:
                if mc.strategy[p][j] not in mc.best_response_set(p, j):
                    return False
        reach >>= 1
        j += 1
    return True


def check_rationalizable_witness(game: Game, M: GammaStructure, player: str,
                                 strategy: str) -> Optional[str]:
    """First state of ``M`` satisfying ``play(player, strategy) and CB RAT``."""
    mc = ModelChecker(M, game)
    target = And(Play(player, strategy), CommonBelief(rat_all(game.players)))
    mask = mc.ext(target)
    for k, sid in enumerate(mc.ids):
        if mask >> k & 1:
            return sid
    return None


def search_rationalizable(game: Game, player: str, strategy: str,
                          max_states: int = DEFAULT_MAX_STATES) -> RatWitness:
    """Look for a witness among point-belief structures of bounded size.

    Only structures generated by a single root are scanned (the states a
    witness can see form such a structure), smallest first.  Structures on
    which some needed utility has no unique true guard are skipped as
    inadmissible and counted in ``skipped``.
    """
    if player not in game.form.strategies:
        raise SolveError(f"unknown player {player!r}")
    if strategy not in game.form.strategies[player]:
        raise SolveError(f"unknown strategy {strategy!r} for player {player!r}")
    players = game.players
    result = RatWitness(player, strategy, max_states)
    structures = enumerate_rooted_point_structures(
        game.form, max_states, atoms_enabled=bool(game.form.extra_atoms),
        root_player=player, root_strategy=strategy)
    for M in structures:
        result.examined += 1
        mc = ModelChecker(M, game)
        try:
            ok = _rat_everywhere_from(mc, 0, players)
        except GuardPartitionError:
            result.skipped += 1
            continue
        if not ok:
            continue
        # independent re-check through the formula path
        if not validate_structure(M, game.form).ok:
            raise SolveError("enumerated structure fails validation")
        state = check_rationalizable_witness(game, M, player, strategy)
        if state != M.states[0].id:
            raise SolveError("witness candidate does not re-check")
        result.structure = M
        result.state = state
        log.debug("witness for %s:%s after %d structures", player, strategy, result.examined)
        return result
    return result


def rationalizable_set(game: Game, max_states: int = DEFAULT_MAX_STATES) -> Dict[Tuple[str, str], RatWitness]:
    return {(p, s): search_rationalizable(game, p, s, max_states)
            for p in game.players for s in game.form.strategies[p]}
