"""JSON game files, structure files and report serialization.

Rationals are written as strings (``"3"``, ``"-1/2"``) so they survive the
round trip exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import jsonschema

from .game import (
    EXAMPLE_GAMES,
    FiniteUtilitySpec,
    Game,
    GameError,
    GameForm,
    UtilityGuard,
    as_fraction,
    compile_classical,
)
from .kripke import GammaStructure, State, StructureError, ValidationReport, validate_structure
from .lang import FormulaError, parse_formula, render_formula

__all__ = [
    "SchemaError",
    "StructureInvalidError",
    "GAME_SCHEMA",
    "STRUCTURE_SCHEMA",
    "fraction_str",
    "game_from_dict",
    "game_to_dict",
    "structure_from_dict",
    "structure_to_dict",
    "load_game",
    "load_structure",
    "mu_to_dict",
    "nash_report_to_dict",
    "witness_to_dict",
    "BUILTIN_PREFIX",
]

BUILTIN_PREFIX = "builtin:"

_RATIONAL = {
    "oneOf": [
        {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$"},
        {"type": "integer"},
    ]
}

GAME_SCHEMA = {
    "type": "object",
    "required": ["players", "strategies"],
    "properties": {
        "name": {"type": "string"},
        "players": {"type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
        "strategies": {
            "type": "object",
            "additionalProperties": {
                "type": "array", "items": {"type": "string", "minLength": 1}, "minItems": 1},
        },
        "atoms": {"type": "array", "items": {"type": "string", "minLength": 1}},
        "utilities": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["guard", "value"],
                    "properties": {"guard": {"type": "string"}, "value": _RATIONAL},
                    "additionalProperties": False,
                },
            },
        },
        "payoffs": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": _RATIONAL},
        },
    },
    "additionalProperties": False,
    "oneOf": [{"required": ["utilities"]}, {"required": ["payoffs"]}],
}

STRUCTURE_SCHEMA = {
    "type": "object",
    "required": ["states"],
    "properties": {
        "states": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "profile", "beliefs"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "profile": {"type": "object", "additionalProperties": {"type": "string"}},
                    "atoms": {"type": "array", "items": {"type": "string"}},
                    "beliefs": {
                        "type": "object",
                        "additionalProperties": {
                            "type": "object", "additionalProperties": _RATIONAL},
                    },
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


class SchemaError(ValueError):
    """A file does not match its schema, or its content does not make sense."""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


class StructureInvalidError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("structure violates the Γ-structure conditions:\n" + str(report))


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _check_schema(data, schema):
    validator = jsonschema.Draft7Validator(schema)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _json_path(err.absolute_path))


def fraction_str(x: Fraction) -> str:
    return str(Fraction(x))


def _profile_key(key: str):
    text = key.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return tuple(part.strip() for part in text.split(","))


def game_from_dict(data: Mapping[str, Any]) -> Game:
    _check_schema(data, GAME_SCHEMA)
    try:
        form = GameForm(tuple(data["players"]), data["strategies"], tuple(data.get("atoms", ())))
    except GameError as exc:
        raise SchemaError(str(exc)) from None
    name = data.get("name", "")
    if "payoffs" in data:
        payoffs = {}
        for key, values in data["payoffs"].items():
            payoffs[_profile_key(key)] = values
        try:
            return compile_classical(form, payoffs, name)
        except GameError as exc:
            raise SchemaError(str(exc), "$.payoffs") from None
    utility = {}
    for p, rows in data["utilities"].items():
        guards = []
        for idx, row in enumerate(rows):
            path = f"$.utilities.{p}[{idx}].guard"
            try:
                f = parse_formula(row["guard"], form)
            except FormulaError as exc:
                raise SchemaError(str(exc), path) from None
            guards.append(UtilityGuard(f, as_fraction(row["value"])))
        utility[p] = FiniteUtilitySpec(guards)
    try:
        return Game(form, utility, name)
    except (GameError, FormulaError) as exc:
        raise SchemaError(str(exc), "$.utilities") from None


def game_to_dict(game: Game) -> Dict[str, Any]:
    form = game.form
    out: Dict[str, Any] = {}
    if game.name:
        out["name"] = game.name
    out["players"] = list(form.players)
    out["strategies"] = {p: list(form.strategies[p]) for p in form.players}
    if form.extra_atoms:
        out["atoms"] = list(form.extra_atoms)
    out["utilities"] = {
        p: [{"guard": render_formula(g.guard, form), "value": fraction_str(g.value)}
            for g in game.utility[p].guards]
        for p in form.players
    }
    return out


def structure_from_dict(data: Mapping[str, Any], form: Optional[GameForm] = None) -> GammaStructure:
    _check_schema(data, STRUCTURE_SCHEMA)
    states = []
    for st in data["states"]:
        beliefs = {p: {t: as_fraction(w) for t, w in row.items()}
                   for p, row in st["beliefs"].items()}
        states.append(State(st["id"], st["profile"], frozenset(st.get("atoms", ())), beliefs))
    players = form.players if form is not None else None
    try:
        return GammaStructure(states, players)
    except StructureError as exc:
        raise SchemaError(str(exc), "$.states") from None


def structure_to_dict(M: GammaStructure) -> Dict[str, Any]:
    return {"states": [
        {
            "id": st.id,
            "profile": {p: st.profile[p] for p in M.players},
            "atoms": sorted(st.atoms),
            "beliefs": {p: {t: fraction_str(w) for t, w in st.beliefs[p].items()}
                        for p in M.players},
        }
        for st in M.states
    ]}


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None


def load_game(path) -> Game:
    """Read a game file, or a built-in example named ``builtin:<name>``."""
    path = str(path)
    if path.startswith(BUILTIN_PREFIX):
        name = path[len(BUILTIN_PREFIX):]
        if name not in EXAMPLE_GAMES:
            raise SchemaError(f"unknown built-in game {name!r}")
        return EXAMPLE_GAMES[name]()
    return game_from_dict(_read_json(path))


def load_structure(path, form: GameForm) -> GammaStructure:
    """Read a structure file and check it against ``form``; fails on any violation."""
    M = structure_from_dict(_read_json(Path(path)), form)
    try:
        report = validate_structure(M, form)
    except StructureError as exc:
        raise SchemaError(str(exc), "$.states") from None
    if not report.ok:
        raise StructureInvalidError(report)
    return M


# -- reports -------------------------------------------------------------------------

def mu_to_dict(mu) -> Dict[str, Dict[str, str]]:
    return {p: {s: fraction_str(w) for s, w in row.items()} for p, row in mu.items()}


def nash_report_to_dict(report, players) -> Dict[str, Any]:
    return {
        "game": report.game,
        "method": report.method,
        "complete": report.complete,
        "denominator_bound": report.denominator_bound,
        "total": len(report.verdicts),
        "feasible_count": len(report.feasible),
        "verdicts": [
            {
                "support": {p: list(sup) for p, sup in zip(players, v.support)},
                "feasible": v.feasible,
                "sample": mu_to_dict(v.sample) if v.sample is not None else None,
            }
            for v in report.verdicts
        ],
    }


def witness_to_dict(w) -> Dict[str, Any]:
    return {
        "player": w.player,
        "strategy": w.strategy,
        "verdict": w.verdict,
        "max_states": w.max_states,
        "examined": w.examined,
        "skipped": w.skipped,
        "state": w.state,
        "structure": structure_to_dict(w.structure) if w.structure is not None else None,
    }
