"""``lbg`` command line front end.

Exit status: 0 success / check passed, 1 check failed or solver error,
2 usage or input-file error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .checker import CheckerError, ModelChecker
from .game import EXAMPLE_GAMES, GameError, GameForm
from .io import (
    BUILTIN_PREFIX,
    SchemaError,
    StructureInvalidError,
    fraction_str,
    game_to_dict,
    load_game,
    load_structure,
    mu_to_dict,
    nash_report_to_dict,
    structure_from_dict,
    witness_to_dict,
    _read_json,
)
from .kripke import StructureError, validate_structure
from .lang import FormulaError, parse_formula
from .repro import REPRO_ITEMS, run_repro
from .solve import (
    DEFAULT_DENOMINATOR_BOUND,
    DEFAULT_MAX_STATES,
    SolveError,
    find_nash,
    is_nash,
    rationalizable_set,
    search_rationalizable,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(text)


def parse_profile(text: str, form: GameForm) -> Dict[str, Dict[str, Fraction]]:
    """Parse ``"A: c=1/2, d=1/2; B: d=1"``; unnamed strategies get probability 0."""
    mu = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise UsageError(f"profile entry {chunk!r} lacks 'player:'")
        player, rest = chunk.split(":", 1)
        player = player.strip()
        row = {}
        for item in rest.split(","):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                raise UsageError(f"profile item {item!r} lacks '=probability'")
            s, w = item.split("=", 1)
            try:
                row[s.strip()] = Fraction(w.strip())
            except ValueError:
                raise UsageError(f"bad probability {w.strip()!r}") from None
        mu[player] = row
    return mu


def _form_from_structure(M) -> GameForm:
    strategies = {p: [] for p in M.players}
    atoms = []
    for st in M.states:
        for p in M.players:
            if st.profile[p] not in strategies[p]:
                strategies[p].append(st.profile[p])
        for a in sorted(st.atoms):
            if a not in atoms:
                atoms.append(a)
    return GameForm(M.players, strategies, tuple(atoms))


# -- commands ------------------------------------------------------------------

def cmd_validate(args) -> int:
    form = load_game(args.game).form if args.game else None
    results = []
    status = EXIT_OK
    for path in args.paths:
        if path.startswith(BUILTIN_PREFIX):
            load_game(path)
            results.append({"path": path, "kind": "game", "ok": True, "violations": []})
            continue
        data = _read_json(path)
        if isinstance(data, dict) and "states" in data:
            M = structure_from_dict(data, form)
            f = form or _form_from_structure(M)
            try:
                report = validate_structure(M, f)
            except StructureError as exc:
                raise SchemaError(str(exc), "$.states") from None
            if not report.ok:
                status = EXIT_FAIL
            results.append({"path": path, "kind": "structure", "ok": report.ok,
                            "violations": [str(v) for v in report.violations]})
        else:
            from .io import game_from_dict
            game_from_dict(data)
            results.append({"path": path, "kind": "game", "ok": True, "violations": []})
    lines = []
    for r in results:
        lines.append(f"{r['path']}: {r['kind']} {'ok' if r['ok'] else 'INVALID'}")
        lines.extend(f"  {v}" for v in r["violations"])
    _emit(args, {"results": results}, "\n".join(lines))
    return status


def cmd_eval(args) -> int:
    game = load_game(args.game) if args.game else None
    if game is not None:
        M = load_structure(args.structure, game.form)
        form = game.form
    else:
        M = structure_from_dict(_read_json(args.structure))
        form = _form_from_structure(M)
        report = validate_structure(M, form)
        if not report.ok:
            raise StructureInvalidError(report)
    f = parse_formula(args.formula, form)
    mc = ModelChecker(M, game)
    if args.state not in M.index:
        raise UsageError(f"unknown state {args.state!r}")
    if args.override:
        if "=" not in args.override:
            raise UsageError("--override expects PLAYER=STRATEGY")
        player, strategy = (x.strip() for x in args.override.split("=", 1))
        if player not in form.players or strategy not in form.strategies[player]:
            raise UsageError(f"unknown override {args.override!r}")
        value = mc.counterfactual_holds(args.state, player, strategy, f)
    else:
        value = mc.holds(args.state, f)
    ext = sorted(mc.ids_of(mc.ext(f)), key=M.index.__getitem__) if not args.override else None
    payload = {"state": args.state, "formula": args.formula, "override": args.override,
               "value": value, "extension": ext}
    _emit(args, payload, "true" if value else "false")
    return EXIT_OK if value else EXIT_FAIL


def cmd_nash_check(args) -> int:
    game = load_game(args.game)
    mu = parse_profile(args.profile, game.form)
    try:
        from .kripke import mixed_profile
        mu = mixed_profile(game.form, mu)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    value = is_nash(game, mu)
    _emit(args, {"profile": mu_to_dict(mu), "nash": value}, "true" if value else "false")
    return EXIT_OK if value else EXIT_FAIL


def cmd_nash_find(args) -> int:
    game = load_game(args.game)
    report = find_nash(game, args.denominator_bound)
    lines = [f"method: {report.method}" + ("" if report.complete else
                                          f" (denominators <= {report.denominator_bound}, incomplete)")]
    for v in report.verdicts:
        sup = "  ".join(f"{p}:{{{','.join(s)}}}" for p, s in zip(game.players, v.support))
        if v.feasible:
            sample = "; ".join(f"{p}: " + ", ".join(f"{s}={fraction_str(w)}" for s, w in row.items() if w)
                               for p, row in v.sample.items())
            lines.append(f"{sup}  feasible  [{sample}]")
        else:
            lines.append(f"{sup}  infeasible")
    lines.append(report.summary())
    _emit(args, nash_report_to_dict(report, game.players), "\n".join(lines))
    return EXIT_OK


def cmd_rat_search(args) -> int:
    game = load_game(args.game)
    w = search_rationalizable(game, args.player, args.strategy, args.max_states)
    payload = witness_to_dict(w)
    if args.output and w.found:
        with open(args.output, "w") as fh:
            json.dump(payload["structure"], fh, indent=2)
    text = f"{args.player}:{args.strategy} {w.verdict}"
    if w.found:
        text += f" at state {w.state} of a {len(w.structure)}-state structure"
    text += f" ({w.examined} structures examined)"
    _emit(args, payload, text)
    return EXIT_OK if w.found else EXIT_FAIL


def cmd_rat_set(args) -> int:
    game = load_game(args.game)
    results = rationalizable_set(game, args.max_states)
    payload = {f"{p}:{s}": witness_to_dict(w) for (p, s), w in results.items()}
    text = "\n".join(f"{p}:{s} {w.verdict}" for (p, s), w in results.items())
    _emit(args, payload, text)
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.action == "show":
        name = (args.name or "").removeprefix(BUILTIN_PREFIX)
        if name not in EXAMPLE_GAMES:
            raise UsageError(f"unknown example {args.name!r}")
        print(json.dumps(game_to_dict(EXAMPLE_GAMES[name]()), indent=2))
        return EXIT_OK
    names = list(EXAMPLE_GAMES)
    _emit(args, {"examples": names}, "\n".join(f"{BUILTIN_PREFIX}{n}" for n in names))
    return EXIT_OK


def cmd_repro(args) -> int:
    selectors = None if args.all or not args.items else args.items
    try:
        results = run_repro(selectors)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    payload = [{"item": r.item, "basis": r.basis, "description": r.description,
                "expected": r.expected, "observed": r.observed, "pass": r.passed}
               for r in results]
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.item:<18} [{r.basis}] "
             f"observed {r.observed!r}" + ("" if r.passed else f", expected {r.expected!r}")
             for r in results]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    parser = argparse.ArgumentParser(prog="lbg", parents=[common],
                                     description="Solver for language-based games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check game and structure files")
    p.add_argument("paths", nargs="+")
    p.add_argument("--game", help="game whose vocabulary structure files must use")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula at a state")
    p.add_argument("--game")
    p.add_argument("--structure", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--override", help="PLAYER=STRATEGY counterfactual override")
    p.set_defaults(func=cmd_eval)

    nash = sub.add_parser("nash", parents=[common], help="Nash equilibrium queries")
    nsub = nash.add_subparsers(dest="nash_command", required=True)
    p = nsub.add_parser("check", parents=[common])
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True, help='e.g. "A: c=1/2, d=1/2; B: d=1"')
    p.set_defaults(func=cmd_nash_check)
    p = nsub.add_parser("find", parents=[common])
    p.add_argument("--game", required=True)
    p.add_argument("--denominator-bound", type=int, default=DEFAULT_DENOMINATOR_BOUND)
    p.set_defaults(func=cmd_nash_find)

    rat = sub.add_parser("rat", parents=[common], help="rationalizability queries")
    rsub = rat.add_subparsers(dest="rat_command", required=True)
    p = rsub.add_parser("search", parents=[common])
    p.add_argument("--game", required=True)
    p.add_argument("--player", required=True)
    p.add_argument("--strategy", required=True)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--output", help="write the witness structure file here")
    p.set_defaults(func=cmd_rat_search)
    p = rsub.add_parser("set", parents=[common])
    p.add_argument("--game", required=True)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_rat_set)

    p = sub.add_parser("examples", parents=[common], help="built-in example games")
    p.add_argument("action", nargs="?", choices=["list", "show"], default="list")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("repro", parents=[common], help="run the reproduction items")
    p.add_argument("items", nargs="*", metavar="ITEM", help=f"any of: {', '.join(REPRO_ITEMS)}")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_repro)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if not hasattr(args, "json"):
        args.json = False
    if getattr(args, "max_states", 1) < 1:
        print("error: --max-states must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, SchemaError, StructureInvalidError, FormulaError,
            OSError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CheckerError, SolveError, GameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
