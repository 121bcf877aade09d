"""Model checking over finite Γ-structures.

State sets are int bitmasks internally (bit k is the k-th state of the
structure).  A :class:`ModelChecker` memoizes extensions per formula for one
structure; the module-level functions create a fresh checker per call.

Counterfactual evaluation ("what if player i played s' here") uses override
semantics: ``play(i, _)`` is read against s', ``B[i]`` recurses into i's
support under the same override, and everything else (other players' play
atoms, other players' beliefs, extra atoms) is evaluated as usual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from .lang import (
    And,
    Believes,
    CommonBelief,
    Formula,
    Not,
    Play,
    Prop,
    Rat,
    UnsupportedConstructError,
    VocabularyError,
    check_vocabulary,
    contains_rat,
    subformulas,
)
from .kripke import GammaStructure

__all__ = [
    "CheckerError",
    "GuardPartitionError",
    "MissingGameError",
    "Extension",
    "ModelChecker",
    "extension",
    "holds",
    "counterfactual_holds",
    "counterfactual_utility",
    "expected_utility",
    "best_responses",
]


class CheckerError(ValueError):
    pass


class MissingGameError(CheckerError):
    """RAT needs utilities, so it cannot be evaluated without a game."""


class GuardPartitionError(CheckerError):
    """Zero or several utility guards hold at an evaluation point."""

    def __init__(self, player, strategy, state, n_true):
        self.player = player
        self.strategy = strategy
        self.state = state
        self.n_true = n_true
        super().__init__(
            f"utility of {player} for {strategy} at state {state}: "
            f"{n_true} guards hold, expected exactly one")


@dataclass(frozen=True)
class Extension:
    structure: GammaStructure
    formula: Formula
    states: FrozenSet[str]

    def __contains__(self, state_id):
        return state_id in self.states


def _bits(mask: int):
    k = 0
    while mask:
        if mask & 1:
            yield k
        mask >>= 1
        k += 1


class ModelChecker:
    """Evaluation session for one structure (and optionally one game)."""

    def __init__(self, structure: GammaStructure, game=None):
        self.M = structure
        self.game = game
        if game is not None and tuple(game.form.players) != tuple(structure.players):
            raise VocabularyError("game and structure have different players")
        n = len(structure.states)
        self.n = n
        self.full = (1 << n) - 1
        self.ids = [st.id for st in structure.states]
        index = structure.index
        self.strategy: Dict[str, List[str]] = {}
        self.support: Dict[str, List[int]] = {}
        self.probs: Dict[str, List[List[Tuple[int, Fraction]]]] = {}
        for p in structure.players:
            self.strategy[p] = [st.profile[p] for st in structure.states]
            sup, pr = [], []
            for st in structure.states:
                row = [(index[t], w) for t, w in st.beliefs[p].items() if w != 0]
                row.sort()
                pr.append(row)
                mask = 0
                for j, _ in row:
                    mask |= 1 << j
                sup.append(mask)
            self.support[p] = sup
            self.probs[p] = pr
        self.atoms = [st.atoms for st in structure.states]
        self._ext: Dict[Formula, int] = {}
        self._cf: Dict[Tuple[str, str, Formula], int] = {}
        self._play: Dict[Tuple[str, str], int] = {}
        self._guard_masks: Dict[Tuple[str, str], List[Tuple[int, Fraction]]] = {}
        self._uhat: Dict[Tuple[str, str, int], Fraction] = {}
        self._rat: Dict[str, int] = {}
        self._reach: Optional[List[int]] = None

    # -- helpers ---------------------------------------------------------------

    def mask_of(self, state_ids) -> int:
        mask = 0
        for s in state_ids:
            mask |= 1 << self.M.index[s]
        return mask

    def ids_of(self, mask: int) -> FrozenSet[str]:
        return frozenset(self.ids[k] for k in _bits(mask))

    def state_index(self, state_id: str) -> int:
        try:
            return self.M.index[state_id]
        except KeyError:
            raise CheckerError(f"unknown state {state_id!r}") from None

    def _check_player(self, p):
        if p not in self.support:
            raise VocabularyError(f"unknown player {p!r}")

    def play_mask(self, player: str, strategy: str) -> int:
        key = (player, strategy)
        mask = self._play.get(key)
        if mask is None:
            self._check_player(player)
            mask = 0
            for k, s in enumerate(self.strategy[player]):
                if s == strategy:
                    mask |= 1 << k
            self._play[key] = mask
        return mask

    def believes_mask(self, player: str, child: int) -> int:
        self._check_player(player)
        mask = 0
        for k, sup in enumerate(self.support[player]):
            if sup & ~child == 0:
                mask |= 1 << k
        return mask

    def reach(self) -> List[int]:
        """States reachable in one or more steps of the union support graph."""
        if self._reach is None:
            reach = [0] * self.n
            for p in self.M.players:
                for k, sup in enumerate(self.support[p]):
                    reach[k] |= sup
            for m in range(self.n):
                bit = 1 << m
                rm = reach[m]
                for k in range(self.n):
                    if reach[k] & bit:
                        reach[k] |= rm
            self._reach = reach
        return self._reach

    def common_belief_mask(self, child: int) -> int:
        mask = 0
        for k, r in enumerate(self.reach()):
            if r & ~child == 0:
                mask |= 1 << k
        return mask

    # -- plain valuation ---------------------------------------------------------

    def ext(self, f: Formula) -> int:
        """Extension of ``f`` as a bitmask."""
        cached = self._ext.get(f)
        if cached is not None:
            return cached
        if isinstance(f, Play):
            mask = self.play_mask(f.player, f.strategy)
        elif isinstance(f, Prop):
            mask = 0
            for k, a in enumerate(self.atoms):
                if f.atom in a:
                    mask |= 1 << k
        elif isinstance(f, Not):
            mask = self.full & ~self.ext(f.sub)
        elif isinstance(f, And):
            mask = self.ext(f.left) & self.ext(f.right)
        elif isinstance(f, Believes):
            mask = self.believes_mask(f.player, self.ext(f.sub))
        elif isinstance(f, CommonBelief):
            mask = self.common_belief_mask(self.ext(f.sub))
        elif isinstance(f, Rat):
            mask = self.rat_mask(f.player)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._ext[f] = mask
        return mask

    def holds(self, state_id: str, f: Formula) -> bool:
        return bool(self.ext(f) >> self.state_index(state_id) & 1)

    # -- counterfactual valuation ------------------------------------------------

    def cf_ext(self, player: str, strategy: str, f: Formula) -> int:
        """States where ``f`` holds once ``player``'s strategy is overridden."""
        key = (player, strategy, f)
        cached = self._cf.get(key)
        if cached is not None:
            return cached
        if isinstance(f, Play):
            if f.player == player:
                mask = self.full if f.strategy == strategy else 0
            else:
                mask = self.ext(f)
        elif isinstance(f, Prop):
            mask = self.ext(f)
        elif isinstance(f, Not):
            mask = self.full & ~self.cf_ext(player, strategy, f.sub)
        elif isinstance(f, And):
            mask = self.cf_ext(player, strategy, f.left) & self.cf_ext(player, strategy, f.right)
        elif isinstance(f, Believes):
            if f.player == player:
                mask = self.believes_mask(player, self.cf_ext(player, strategy, f.sub))
            else:
                mask = self.ext(f)
        elif isinstance(f, (CommonBelief, Rat)):
            raise UnsupportedConstructError(
                "counterfactual evaluation is defined for CB-free, RAT-free formulas")
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._cf[key] = mask
        return mask

    def counterfactual_holds(self, state_id: str, player: str, strategy: str, f: Formula) -> bool:
        return bool(self.cf_ext(player, strategy, f) >> self.state_index(state_id) & 1)

    # -- utilities and rationality -------------------------------------------------

    def _require_game(self):
        if self.game is None:
            raise MissingGameError("RAT and utilities need a game")
        return self.game

    def _check_strategy(self, player, strategy):
        game = self._require_game()
        if player not in game.form.strategies:
            raise VocabularyError(f"unknown player {player!r}")
        if strategy not in game.form.strategies[player]:
            raise VocabularyError(f"unknown strategy {strategy!r} for player {player!r}")

    def guard_masks(self, player: str, strategy: str) -> List[Tuple[int, Fraction]]:
        key = (player, strategy)
        masks = self._guard_masks.get(key)
        if masks is None:
            self._check_strategy(player, strategy)
            spec = self.game.utility[player]
            masks = [(self.cf_ext(player, strategy, g.guard), g.value) for g in spec.guards]
            self._guard_masks[key] = masks
        return masks

    def uhat(self, player: str, strategy: str, k: int) -> Fraction:
        """Utility of ``player`` at state index ``k`` had they played ``strategy``."""
        key = (player, strategy, k)
        value = self._uhat.get(key)
        if value is None:
            hits = [v for mask, v in self.guard_masks(player, strategy) if mask >> k & 1]
            if len(hits) != 1:
                raise GuardPartitionError(player, strategy, self.ids[k], len(hits))
            value = hits[0]
            self._uhat[key] = value
        return value

    def eu(self, player: str, strategy: str, k: int) -> Fraction:
        total = Fraction(0)
        for j, w in self.probs[player][k]:
            total += self.uhat(player, strategy, j) * w
        return total

    def best_response_set(self, player: str, k: int) -> Set[str]:
        game = self._require_game()
        strategies = game.form.strategies[player]
        if len(strategies) == 1:
            # nothing to compare; utilities are not consulted
            return {strategies[0]}
        values = {s: self.eu(player, s, k) for s in strategies}
        best = max(values.values())
        return {s for s, v in values.items() if v == best}

    def rat_mask(self, player: str) -> int:
        mask = self._rat.get(player)
        if mask is None:
            self._require_game()
            self._check_player(player)
            mask = 0
            for k in range(self.n):
                if self.strategy[player][k] in self.best_response_set(player, k):
                    mask |= 1 << k
            self._rat[player] = mask
        return mask


def _prepare(M, f, game):
    if contains_rat(f) and game is None:
        raise MissingGameError("formula mentions RAT; a game is required")
    if game is not None:
        check_vocabulary(f, game.form)
    else:
        players = set(M.players)
        for g in subformulas(f):
            if isinstance(g, (Play, Believes, Rat)) and g.player not in players:
                raise VocabularyError(f"unknown player {g.player!r}")
    return ModelChecker(M, game)


def extension(M: GammaStructure, f: Formula, game=None) -> Extension:
    mc = _prepare(M, f, game)
    return Extension(M, f, mc.ids_of(mc.ext(f)))


def holds(M: GammaStructure, state_id: str, f: Formula, game=None) -> bool:
    mc = _prepare(M, f, game)
    return mc.holds(state_id, f)


def counterfactual_holds(M: GammaStructure, state_id: str, player: str,
                         strategy: str, f: Formula) -> bool:
    mc = _prepare(M, f, None)
    return mc.counterfactual_holds(state_id, player, strategy, f)


def counterfactual_utility(game, M: GammaStructure, state_id: str, player: str,
                           strategy: str) -> Fraction:
    mc = ModelChecker(M, game)
    return mc.uhat(player, strategy, mc.state_index(state_id))


def expected_utility(game, M: GammaStructure, state_id: str, player: str,
                     strategy: str) -> Fraction:
    mc = ModelChecker(M, game)
    mc._check_strategy(player, strategy)
    return mc.eu(player, strategy, mc.state_index(state_id))


def best_responses(game, M: GammaStructure, state_id: str, player: str) -> Set[str]:
    mc = ModelChecker(M, game)
    mc._check_player(player)
    return mc.best_response_set(player, mc.state_index(state_id))
