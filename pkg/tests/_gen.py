"""Seeded random generators for forms, formulas, structures and games."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from lbgames.game import GameForm, compile_classical
from lbgames.kripke import GammaStructure, State
from lbgames.lang import And, Believes, CommonBelief, Not, Play, Prop, Rat

PLAYER_NAMES = ["A", "B", "C"]
STRATEGY_NAMES = ["c", "d", "e"]
ATOM_NAMES = ["x", "y"]


def random_form(rng: random.Random, max_players=3, max_strategies=3, atoms=True) -> GameForm:
    n = rng.randint(1, max_players)
    players = PLAYER_NAMES[:n]
    strategies = {p: STRATEGY_NAMES[:rng.randint(1, max_strategies)] for p in players}
    extra = ATOM_NAMES[:rng.randint(0, len(ATOM_NAMES))] if atoms else []
    return GameForm(tuple(players), strategies, tuple(extra))


def random_formula(rng: random.Random, form: GameForm, depth=3, cb=True, rat=False):
    if depth == 0 or rng.random() < 0.25:
        kinds = ["play"] + (["prop"] if form.extra_atoms else []) + (["rat"] if rat else [])
        kind = rng.choice(kinds)
        p = rng.choice(form.players)
        if kind == "play":
            return Play(p, rng.choice(form.strategies[p]))
        if kind == "prop":
            return Prop(rng.choice(form.extra_atoms))
        return Rat(p)
    kinds = ["not", "and", "and", "B", "B"] + (["CB"] if cb else [])
    kind = rng.choice(kinds)
    if kind == "not":
        return Not(random_formula(rng, form, depth - 1, cb, rat))
    if kind == "and":
        return And(random_formula(rng, form, depth - 1, cb, rat),
                   random_formula(rng, form, depth - 1, cb, rat))
    if kind == "B":
        return Believes(rng.choice(form.players), random_formula(rng, form, depth - 1, cb, rat))
    return CommonBelief(random_formula(rng, form, depth - 1, cb, rat))


def _random_distribution(rng, targets):
    weights = [rng.randint(1, 4) for _ in targets]
    total = sum(weights)
    return {t: Fraction(w, total) for t, w in zip(targets, weights)}


def random_structure(rng: random.Random, form: GameForm, max_states=5, point=False) -> GammaStructure:
    """A structure satisfying all four conditions, with arbitrary supports.

    Per player, the states of each own-strategy class are split into
    self-supporting blocks (each with one shared distribution) and states
    that point at one of those blocks.
    """
    n = rng.randint(1, max_states)
    ids = [f"s{k}" for k in range(n)]
    profiles = [{p: rng.choice(form.strategies[p]) for p in form.players} for _ in range(n)]
    atoms = [frozenset(a for a in form.extra_atoms if rng.random() < 0.5) for _ in range(n)]
    beliefs = [dict() for _ in range(n)]
    for p in form.players:
        classes = {}
        for k in range(n):
            classes.setdefault(profiles[k][p], []).append(k)
        for members in classes.values():
            members = members[:]
            rng.shuffle(members)
            n_core = rng.randint(1, len(members))
            core, rest = members[:n_core], members[n_core:]
            blocks = []
            for k in core:
                if blocks and not point and rng.random() < 0.5:
                    rng.choice(blocks).append(k)
                else:
                    blocks.append([k])
            dists = [_random_distribution(rng, [ids[k] for k in b]) for b in blocks]
            for b, dist in zip(blocks, dists):
                for k in b:
                    beliefs[k][p] = dict(dist)
            for k in rest:
                beliefs[k][p] = dict(rng.choice(dists))
    states = [State(ids[k], profiles[k], atoms[k], beliefs[k]) for k in range(n)]
    return GammaStructure(states, form.players)


def reweight(rng: random.Random, M: GammaStructure) -> GammaStructure:
    """Same supports, fresh positive weights (shared rows stay shared)."""
    fresh = {}
    states = []
    for st_ in M.states:
        beliefs = {}
        for p in M.players:
            row = st_.beliefs[p]
            key = (p, tuple(sorted(t for t, w in row.items() if w)))
            if key not in fresh:
                fresh[key] = _random_distribution(rng, list(key[1]))
            beliefs[p] = dict(fresh[key])
        states.append(State(st_.id, dict(st_.profile), st_.atoms, beliefs))
    return GammaStructure(states, M.players)


def random_mu(rng: random.Random, form: GameForm, max_den=6):
    mu = {}
    for p in form.players:
        ss = list(form.strategies[p])
        support = rng.sample(ss, rng.randint(1, len(ss)))
        weights = {s: rng.randint(1, max_den) for s in support}
        total = sum(weights.values())
        mu[p] = {s: Fraction(weights.get(s, 0), total) for s in ss}
    return mu


def random_classical(rng: random.Random, rows=2, cols=2, lo=0, hi=5):
    form = GameForm(("A", "B"), {"A": STRATEGY_NAMES[:rows], "B": STRATEGY_NAMES[:cols]})
    payoffs = {prof: (rng.randint(lo, hi), rng.randint(lo, hi)) for prof in form.profiles()}
    return compile_classical(form, payoffs, "random"), payoffs


# hypothesis strategies

@st.composite
def forms(draw, max_players=3, atoms=True):
    return random_form(random.Random(draw(st.integers(0, 2**32))), max_players, atoms=atoms)


@st.composite
def formulas(draw, form, cb=True, rat=False, max_depth=4):
    """Formula AST drawn node by node so hypothesis can shrink it."""
    def go(depth):
        leaf_kinds = ["play"] + (["prop"] if form.extra_atoms else []) + (["rat"] if rat else [])
        kinds = leaf_kinds if depth == 0 else leaf_kinds + ["not", "and", "B"] + (["CB"] if cb else [])
        kind = draw(st.sampled_from(kinds))
        if kind == "play":
            p = draw(st.sampled_from(form.players))
            return Play(p, draw(st.sampled_from(form.strategies[p])))
        if kind == "prop":
            return Prop(draw(st.sampled_from(form.extra_atoms)))
        if kind == "rat":
            return Rat(draw(st.sampled_from(form.players)))
        if kind == "not":
            return Not(go(depth - 1))
        if kind == "and":
            return And(go(depth - 1), go(depth - 1))
        if kind == "B":
            return Believes(draw(st.sampled_from(form.players)), go(depth - 1))
        return CommonBelief(go(depth - 1))
    return go(draw(st.integers(0, max_depth)))


seeds = st.integers(min_value=0, max_value=2**32)
