"""Finite Γ-structures: states carrying a strategy profile, extra-atom labels
and one belief distribution per player.

Probabilities are exact ``Fraction`` values throughout; supports are computed
by comparing against zero, never with a tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from .game import GameForm, as_fraction

__all__ = [
    "StructureError",
    "State",
    "GammaStructure",
    "Violation",
    "ValidationReport",
    "validate_structure",
    "mixed_profile",
    "support_of",
    "build_characteristic_structure",
    "profile_state_id",
    "enumerate_point_belief_structures",
    "enumerate_rooted_point_structures",
    "point_structure",
]


class StructureError(ValueError):
    """Malformed structure: dangling references or unknown vocabulary."""


@dataclass(frozen=True)
class State:
    id: str
    profile: Mapping[str, str]
    atoms: FrozenSet[str] = frozenset()
    beliefs: Mapping[str, Mapping[str, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "profile", dict(self.profile))
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        beliefs = {p: {s: as_fraction(w) for s, w in row.items()}
                   for p, row in self.beliefs.items()}
        object.__setattr__(self, "beliefs", beliefs)

    def support(self, player: str) -> FrozenSet[str]:
        return frozenset(s for s, w in self.beliefs.get(player, {}).items() if w != 0)


class GammaStructure:
    """An ordered, finite list of states over a fixed player list.

    Construction only checks that the data are well formed (unique ids,
    total profiles, belief rows pointing at existing states).  The modelling
    conditions are checked by :func:`validate_structure`.
    """

    def __init__(self, states: Sequence[State], players: Optional[Sequence[str]] = None):
        self.states: Tuple[State, ...] = tuple(states)
        if players is None:
            players = tuple(self.states[0].profile) if self.states else ()
        self.players: Tuple[str, ...] = tuple(players)
        self.index: Dict[str, int] = {}
        for k, st in enumerate(self.states):
            if st.id in self.index:
                raise StructureError(f"duplicate state id {st.id!r}")
            self.index[st.id] = k
        for st in self.states:
            if set(st.profile) != set(self.players):
                raise StructureError(
                    f"state {st.id!r}: profile must assign exactly the players {list(self.players)}")
            for p, row in st.beliefs.items():
                if p not in self.players:
                    raise StructureError(f"state {st.id!r}: beliefs for unknown player {p!r}")
                for target in row:
                    if target not in self.index:
                        raise StructureError(
                            f"state {st.id!r}: player {p!r} believes in unknown state {target!r}")
            missing = [p for p in self.players if p not in st.beliefs]
            if missing:
                raise StructureError(f"state {st.id!r}: no beliefs for players {missing}")

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, state_id: str) -> State:
        return self.states[self.index[state_id]]

    @property
    def ids(self) -> List[str]:
        return [s.id for s in self.states]

    def __eq__(self, other):
        if not isinstance(other, GammaStructure):
            return NotImplemented
        return self.players == other.players and self.states == other.states

    __hash__ = None

    def __repr__(self):
        return f"GammaStructure({len(self.states)} states, players={list(self.players)})"


@dataclass(frozen=True)
class Violation:
    condition: str
    player: Optional[str]
    state: Optional[str]
    message: str

    def __str__(self):
        return f"{self.condition}: {self.message}"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def _nonzero(row: Mapping[str, Fraction]) -> Dict[str, Fraction]:
    return {s: w for s, w in row.items() if w != 0}


def validate_structure(M: GammaStructure, form: GameForm) -> ValidationReport:
    """Check P1-P4 (finite discrete state space) against ``form``.

    Vocabulary mismatches raise :class:`StructureError`; modelling
    violations are collected in the report.
    """
    if tuple(M.players) != tuple(form.players):
        raise StructureError(
            f"structure players {list(M.players)} differ from game form players {list(form.players)}")
    for st in M.states:
        for p, s in st.profile.items():
            if s not in form.strategies[p]:
                raise StructureError(f"state {st.id!r}: unknown strategy {s!r} for player {p!r}")
        unknown = st.atoms - set(form.extra_atoms)
        if unknown:
            raise StructureError(f"state {st.id!r}: unknown atoms {sorted(unknown)}")

    report = ValidationReport()
    add = report.violations.append
    if not M.states:
        add(Violation("P1", None, None, "state space is empty"))
        return report
    for st in M.states:
        for p in M.players:
            row = st.beliefs[p]
            negative = [t for t, w in row.items() if w < 0]
            if negative:
                add(Violation("P2", p, st.id,
                              f"player {p} at {st.id}: negative probability on {negative}"))
                continue
            total = sum(row.values(), Fraction(0))
            if total != 1:
                add(Violation("P2", p, st.id,
                              f"player {p} at {st.id}: probabilities sum to {total}"))
                continue
            mine = _nonzero(row)
            for t in sorted(mine, key=M.index.__getitem__):
                other = M[t]
                if _nonzero(other.beliefs[p]) != mine:
                    add(Violation("P3", p, st.id,
                                  f"player {p} at {st.id}: belief differs at supported state {t}"))
                if other.profile[p] != st.profile[p]:
                    add(Violation("P4", p, st.id,
                                  f"player {p} at {st.id}: supported state {t} has "
                                  f"strategy {other.profile[p]} instead of {st.profile[p]}"))
    return report


# -- mixed profiles and the characteristic structure ---------------------------

def mixed_profile(form: GameForm, mu: Mapping[str, Mapping[str, object]]) -> Dict[str, Dict[str, Fraction]]:
    """Normalize and check a mixed profile: exact, nonnegative, each row sums to 1."""
    out = {}
    for p in form.players:
        if p not in mu:
            raise ValueError(f"no mixed strategy for player {p!r}")
        row = {}
        for s, w in mu[p].items():
            if s not in form.strategies[p]:
                raise ValueError(f"unknown strategy {s!r} for player {p!r}")
            w = as_fraction(w)
            if w < 0:
                raise ValueError(f"negative probability for {p}:{s}")
            row[s] = w
        if sum(row.values(), Fraction(0)) != 1:
            raise ValueError(f"mixed strategy of {p!r} does not sum to 1")
        out[p] = {s: row.get(s, Fraction(0)) for s in form.strategies[p]}
    extra = set(mu) - set(form.players)
    if extra:
        raise ValueError(f"mixed strategies for unknown players {sorted(extra)}")
    return out


def support_of(mu: Mapping[str, Mapping[str, Fraction]], form: GameForm) -> Tuple[Tuple[str, ...], ...]:
    """Support profile of ``mu``, ordered as in the game form."""
    return tuple(tuple(s for s in form.strategies[p] if mu[p].get(s, 0) != 0)
                 for p in form.players)


def profile_state_id(profile: Sequence[str]) -> str:
    return "(" + ",".join(profile) + ")"


def build_characteristic_structure(form: GameForm, mu) -> GammaStructure:
    """States are the support product; each player is sure of their own
    strategy and believes the others mix according to ``mu``."""
    if form.extra_atoms:
        raise StructureError("characteristic structures are defined for strategy-only vocabularies")
    mu = mixed_profile(form, mu)
    supports = support_of(mu, form)
    profiles = list(itertools.product(*supports))
    weight = {}
    for prof in profiles:
        w = Fraction(1)
        for p, s in zip(form.players, prof):
            w *= mu[p][s]
        weight[prof] = w
    states = []
    for prof in profiles:
        beliefs = {}
        for idx, p in enumerate(form.players):
            own = mu[p][prof[idx]]
            beliefs[p] = {profile_state_id(other): weight[other] / own
                          for other in profiles if other[idx] == prof[idx]}
        states.append(State(profile_state_id(prof), dict(zip(form.players, prof)),
                            frozenset(), beliefs))
    return GammaStructure(states, form.players)


# -- enumeration -----------------------------------------------------------------

def point_structure(form: GameForm, profiles, belief_maps, atoms=None,
                    ids: Optional[Sequence[str]] = None) -> GammaStructure:
    """Structure with point-mass beliefs.

    ``profiles[k]`` is the strategy tuple of state k, ``belief_maps[p][k]``
    the index of the state player p is sure of at k.
    """
    n = len(profiles)
    ids = list(ids) if ids is not None else [f"w{k}" for k in range(n)]
    atoms = atoms if atoms is not None else [frozenset()] * n
    one = Fraction(1)
    states = []
    for k in range(n):
        beliefs = {p: {ids[belief_maps[p][k]]: one} for p in form.players}
        states.append(State(ids[k], dict(zip(form.players, profiles[k])), atoms[k], beliefs))
    return GammaStructure(states, form.players)


def _set_structure(form: GameForm, profiles, supports, atoms) -> GammaStructure:
    n = len(profiles)
    ids = [f"w{k}" for k in range(n)]
    states = []
    for k in range(n):
        beliefs = {}
        for p in form.players:
            targets = supports[p][k]
            w = Fraction(1, len(targets))
            beliefs[p] = {ids[t]: w for t in targets}
        states.append(State(ids[k], dict(zip(form.players, profiles[k])), atoms[k], beliefs))
    return GammaStructure(states, form.players)


def _idempotent_maps(cls: Sequence[int]):
    """All idempotent maps of ``cls`` into itself, as dicts."""
    cls = list(cls)
    for r in range(1, len(cls) + 1):
        for fixed in itertools.combinations(cls, r):
            rest = [x for x in cls if x not in fixed]
            for images in itertools.product(fixed, repeat=len(rest)):
                m = {x: x for x in fixed}
                m.update(zip(rest, images))
                yield m


def _set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _uniform_belief_maps(cls: Sequence[int]):
    """Support maps on one strategy class satisfying the introspection condition.

    Each state maps to a block of self-supporting states; every state of a
    block maps to the block itself.
    """
    cls = list(cls)
    for r in range(1, len(cls) + 1):
        for core in itertools.combinations(cls, r):
            rest = [x for x in cls if x not in core]
            for blocks in _set_partitions(core):
                blocks = [tuple(sorted(b)) for b in blocks]
                for images in itertools.product(range(len(blocks)), repeat=len(rest)):
                    m = {}
                    for b in blocks:
                        for x in b:
                            m[x] = b
                    for x, bi in zip(rest, images):
                        m[x] = blocks[bi]
                    yield m


def _class_maps(n, profiles, p_idx, maker):
    classes: Dict[str, List[int]] = {}
    for k in range(n):
        classes.setdefault(profiles[k][p_idx], []).append(k)
    per_class = [list(maker(c)) for c in classes.values()]
    for combo in itertools.product(*per_class):
        m = {}
        for part in combo:
            m.update(part)
        yield tuple(m[k] for k in range(n))


def _encode(profiles, atoms, maps, perm):
    # perm[old] = new; returns the encoding of the relabeled structure
    n = len(profiles)
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old

    def image(t):
        if isinstance(t, tuple):
            return tuple(sorted(perm[x] for x in t))
        return perm[t]

    return tuple(
        (profiles[inv[k]], atoms[inv[k]], tuple(image(m[inv[k]]) for m in maps))
        for k in range(n))


def enumerate_point_belief_structures(form: GameForm, max_states: int,
                                      atoms_enabled: bool = False,
                                      beliefs: str = "point") -> Iterator[GammaStructure]:
    """Every structure with at most ``max_states`` states, up to relabeling.

    With ``beliefs="point"`` each belief is a point mass, so introspection
    reduces to idempotent belief maps.  ``beliefs="uniform"`` instead allows
    any support and spreads probability uniformly over it.

    A labeled structure is yielded iff its encoding is the lexicographic
    minimum over all relabelings.  Order: by size, then by encoding.
    """
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    if beliefs not in ("point", "uniform"):
        raise ValueError(f"unknown belief mode {beliefs!r}")
    maker = _idempotent_maps if beliefs == "point" else _uniform_belief_maps
    all_profiles = list(form.profiles())
    atom_sets = [()]
    if atoms_enabled and form.extra_atoms:
        atom_sets = [tuple(c) for r in range(len(form.extra_atoms) + 1)
                     for c in itertools.combinations(form.extra_atoms, r)]
    labels = list(itertools.product(all_profiles, atom_sets))
    for n in range(1, max_states + 1):
        perms = list(itertools.permutations(range(n)))
        found = []
        for assignment in itertools.product(labels, repeat=n):
            profiles = [a[0] for a in assignment]
            atoms = [a[1] for a in assignment]
            per_player = [list(_class_maps(n, profiles, i, maker))
                          for i in range(len(form.players))]
            for maps in itertools.product(*per_player):
                enc = _encode(profiles, atoms, maps, perms[0])
                if all(enc <= _encode(profiles, atoms, maps, pi) for pi in perms[1:]):
                    found.append((enc, profiles, atoms, maps))
        found.sort(key=lambda item: item[0])
        for _, profiles, atoms, maps in found:
            atom_frozen = [frozenset(a) for a in atoms]
            if beliefs == "point":
                yield point_structure(form, profiles,
                                      {p: maps[i] for i, p in enumerate(form.players)},
                                      atom_frozen)
            else:
                yield _set_structure(form, profiles,
                                     {p: maps[i] for i, p in enumerate(form.players)},
                                     atom_frozen)


def enumerate_rooted_point_structures(form: GameForm, max_states: int,
                                      atoms_enabled: bool = False,
                                      root_player: Optional[str] = None,
                                      root_strategy: Optional[str] = None
                                      ) -> Iterator[GammaStructure]:
    """Point-belief structures in which every state is reachable from state ``w0``.

    Each rooted structure appears once, labeled in breadth-first discovery
    order: states are scanned in label order, players in form order, and a
    belief target not seen before gets the next free label.  Structures come
    in increasing size.  Optionally the root is constrained to play
    ``root_strategy`` for ``root_player``.
    """
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    players = form.players
    m = len(players)
    atom_sets = [frozenset()]
    if atoms_enabled and form.extra_atoms:
        atom_sets = [frozenset(c) for r in range(len(form.extra_atoms) + 1)
                     for c in itertools.combinations(form.extra_atoms, r)]

    def labelings(fixed_idx=None, fixed_value=None):
        choices = []
        for i, p in enumerate(players):
            if i == fixed_idx:
                choices.append((fixed_value,))
            else:
                choices.append(form.strategies[p])
        for prof in itertools.product(*choices):
            for a in atom_sets:
                yield prof, a

    profiles: List[Tuple[str, ...]] = []
    atoms: List[FrozenSet[str]] = []
    bmap: List[List[Optional[int]]] = [[] for _ in players]

    def new_state(prof, a, forced_player=None):
        k = len(profiles)
        profiles.append(prof)
        atoms.append(a)
        for i in range(m):
            bmap[i].append(k if i == forced_player else None)
        return k

    def drop_state():
        profiles.pop()
        atoms.pop()
        for i in range(m):
            bmap[i].pop()

    def emit():
        return point_structure(form, list(profiles),
                               {p: list(bmap[i]) for i, p in enumerate(players)},
                               list(atoms))

    def fill(slot, size):
        n = len(profiles)
        if slot == n * m:
            if n == size:
                yield emit()
            return
        k, i = divmod(slot, m)
        if bmap[i][k] is not None:
            yield from fill(slot + 1, size)
            return
        mine = profiles[k][i]
        for j in range(n):
            if profiles[j][i] != mine:
                continue
            if j == k:
                bmap[i][k] = k
                yield from fill(slot + 1, size)
                bmap[i][k] = None
            elif bmap[i][j] == j:
                bmap[i][k] = j
                yield from fill(slot + 1, size)
                bmap[i][k] = None
            elif bmap[i][j] is None:
                bmap[i][j] = j
                bmap[i][k] = j
                yield from fill(slot + 1, size)
                bmap[i][k] = None
                bmap[i][j] = None
        if n < size:
            for prof, a in labelings(i, mine):
                j = new_state(prof, a, forced_player=i)
                bmap[i][k] = j
                yield from fill(slot + 1, size)
                bmap[i][k] = None
                drop_state()

    if root_player is not None:
        root_idx = players.index(root_player)
        if root_strategy not in form.strategies[root_player]:
            raise ValueError(f"unknown strategy {root_strategy!r} for {root_player!r}")
        roots = list(labelings(root_idx, root_strategy))
    else:
        roots = list(labelings())
    for size in range(1, max_states + 1):
        for prof, a in roots:
            new_state(prof, a)
            yield from fill(0, size)
            drop_state()
