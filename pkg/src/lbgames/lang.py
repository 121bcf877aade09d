"""Formulas of the belief language: AST, parser, printer and syntactic queries.

The AST has seven constructors.  Everything else the concrete syntax offers
(``or``, ``->``, ``P[i]``, ``EB``, ``EB^k``, profile ``play((...))`` and bare
``RAT``) is expanded at parse time::

    a or b      ==> not (not a and not b)
    a -> b      ==> not (a and not b)
    P[i] a      ==> not B[i] not a
    EB a        ==> B[1] a and ... and B[n] a
    RAT         ==> RAT[1] and ... and RAT[n]

Conjunctions built from n-ary sources associate to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "Formula",
    "Play",
    "Prop",
    "Rat",
    "Not",
    "And",
    "Believes",
    "CommonBelief",
    "FormulaError",
    "FormulaSyntaxError",
    "VocabularyError",
    "UnsupportedConstructError",
    "conj",
    "disj",
    "implies",
    "possible",
    "everyone_believes",
    "play_profile",
    "rat_all",
    "parse_formula",
    "render_formula",
    "modal_depth",
    "is_i_independent",
    "subformulas",
    "check_vocabulary",
    "contains_cb",
    "contains_rat",
]


class FormulaError(ValueError):
    """Base class for formula errors."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class VocabularyError(FormulaError):
    """A formula mentions a player, strategy or atom the game form lacks."""


class UnsupportedConstructError(FormulaError):
    """The operation is undefined for CB or RAT subformulas."""


def _cached_hash(cls):
    # Formulas are used as memo keys; recursive dataclass hashing would be
    # O(size) on every lookup.
    field_hash = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = field_hash(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls


@_cached_hash
@dataclass(frozen=True)
class Play:
    player: str
    strategy: str


@_cached_hash
@dataclass(frozen=True)
class Prop:
    atom: str


@_cached_hash
@dataclass(frozen=True)
class Rat:
    player: str


@_cached_hash
@dataclass(frozen=True)
class Not:
    sub: "Formula"


@_cached_hash
@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@_cached_hash
@dataclass(frozen=True)
class Believes:
    player: str
    sub: "Formula"


@_cached_hash
@dataclass(frozen=True)
class CommonBelief:
    sub: "Formula"


Formula = Union[Play, Prop, Rat, Not, And, Believes, CommonBelief]
_ATOMS = (Play, Prop, Rat)


# -- derived connectives -----------------------------------------------------

def conj(parts: Iterable[Formula]) -> Formula:
    """Right-associated conjunction of a nonempty sequence."""
    items = list(parts)
    if not items:
        raise ValueError("empty conjunction")
    result = items[-1]
    for f in reversed(items[:-1]):
        result = And(f, result)
    return result


def disj(parts: Iterable[Formula]) -> Formula:
    """Right-associated disjunction, expanded to the core constructors."""
    items = list(parts)
    if not items:
        raise ValueError("empty disjunction")
    result = items[-1]
    for f in reversed(items[:-1]):
        result = Not(And(Not(f), Not(result)))
    return result


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def possible(player: str, f: Formula) -> Formula:
    return Not(Believes(player, Not(f)))


def everyone_believes(players: Sequence[str], f: Formula, k: int = 1) -> Formula:
    for _ in range(k):
        f = conj(Believes(p, f) for p in players)
    return f


def play_profile(players: Sequence[str], profile: Sequence[str]) -> Formula:
    if len(players) != len(profile):
        raise VocabularyError(
            f"profile has {len(profile)} strategies for {len(players)} players")
    return conj(Play(p, s) for p, s in zip(players, profile))


def rat_all(players: Sequence[str]) -> Formula:
    return conj(Rat(p) for p in players)


# -- traversal -----------------------------------------------------------------

def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Not, Believes, CommonBelief)):
            stack.append(g.sub)


def contains_cb(f: Formula) -> bool:
    return any(isinstance(g, CommonBelief) for g in subformulas(f))


def contains_rat(f: Formula) -> bool:
    return any(isinstance(g, Rat) for g in subformulas(f))


def check_vocabulary(f: Formula, form) -> None:
    """Raise VocabularyError if ``f`` strays outside ``form``'s vocabulary."""
    players = set(form.players)
    atoms = set(form.extra_atoms)
    for g in subformulas(f):
        if isinstance(g, Play):
            if g.player not in players:
                raise VocabularyError(f"unknown player {g.player!r}")
            if g.strategy not in form.strategies[g.player]:
                raise VocabularyError(
                    f"unknown strategy {g.strategy!r} for player {g.player!r}")
        elif isinstance(g, (Rat, Believes)):
            if g.player not in players:
                raise VocabularyError(f"unknown player {g.player!r}")
        elif isinstance(g, Prop):
            if g.atom not in atoms:
                raise VocabularyError(f"unknown atom {g.atom!r}")


def modal_depth(f: Formula) -> int:
    if isinstance(f, _ATOMS):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.sub)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, Believes):
        return 1 + modal_depth(f.sub)
    if isinstance(f, CommonBelief):
        raise UnsupportedConstructError("modal depth is undefined under CB")
    raise TypeError(f"not a formula: {f!r}")


def is_i_independent(f: Formula, player: str) -> bool:
    """True iff every ``Play(player, _)`` lies under some ``Believes(j, _)``, j != player.

    Extra atoms are independent of every player.
    """
    def walk(g, shielded):
        if isinstance(g, Play):
            return shielded or g.player != player
        if isinstance(g, Prop):
            return True
        if isinstance(g, Not):
            return walk(g.sub, shielded)
        if isinstance(g, And):
            return walk(g.left, shielded) and walk(g.right, shielded)
        if isinstance(g, Believes):
            return walk(g.sub, shielded or g.player != player)
        if isinstance(g, (Rat, CommonBelief)):
            raise UnsupportedConstructError(
                "i-independence is defined for CB-free, RAT-free formulas")
        raise TypeError(f"not a formula: {g!r}")

    return walk(f, False)


# -- parsing -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<punct>[()\[\],^])
  | (?P<int>\d+(?![A-Za-z_]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.]*|\d[A-Za-z0-9_.]*)
""", re.VERBOSE)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind in ("arrow", "punct"):
                kind = value
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, form):
        self.text = text
        self.form = form
        self.tokens = _tokenize(text)
        self.i = 0

    # token helpers
    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return FormulaSyntaxError(message, tok[2], self.text)

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            shown = tok[1] or "end of input"
            raise self.error(f"expected {kind!r}, found {shown!r}")
        return self.advance()

    def name(self, what):
        tok = self.peek()
        if tok[0] not in ("ident", "int"):
            raise self.error(f"expected {what}")
        return self.advance()[1]

    def at_keyword(self, word):
        tok = self.peek()
        return tok[0] == "ident" and tok[1] == word

    # vocabulary helpers
    def players(self):
        if self.form is None:
            return None
        return list(self.form.players)

    def check_player(self, name, tok):
        if self.form is not None and name not in self.form.players:
            raise VocabularyError(f"unknown player {name!r} at position {tok[2]}")

    # grammar
    def parse(self):
        f = self.implication()
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.advance()
            right = self.implication()
            return implies(left, right)
        return left

    def disjunction(self):
        parts = [self.conjunction()]
        while self.at_keyword("or"):
            self.advance()
            parts.append(self.conjunction())
        return disj(parts)

    def conjunction(self):
        parts = [self.unary()]
        while self.at_keyword("and"):
            self.advance()
            parts.append(self.unary())
        return conj(parts)

    def bracket_player(self):
        self.expect("[")
        tok = self.peek()
        name = self.name("player")
        self.check_player(name, tok)
        self.expect("]")
        return name

    def unary(self):
        tok = self.peek()
        if tok[0] == "(":
            self.advance()
            f = self.implication()
            self.expect(")")
            return f
        if tok[0] != "ident":
            shown = tok[1] or "end of input"
            raise self.error(f"expected a formula, found {shown!r}")
        word = tok[1]
        if word == "not":
            self.advance()
            return Not(self.unary())
        if word == "B":
            self.advance()
            player = self.bracket_player()
            return Believes(player, self.unary())
        if word == "P":
            self.advance()
            player = self.bracket_player()
            return possible(player, self.unary())
        if word == "EB":
            self.advance()
            k = 1
            if self.peek()[0] == "^":
                self.advance()
                k_tok = self.expect("int")
                k = int(k_tok[1])
                if k < 1:
                    raise self.error("EB exponent must be positive", k_tok)
            players = self.players()
            if players is None:
                raise self.error("EB needs a game form to expand", tok)
            return everyone_believes(players, self.unary(), k)
        if word == "CB":
            self.advance()
            return CommonBelief(self.unary())
        if word == "RAT":
            self.advance()
            if self.peek()[0] == "[":
                return Rat(self.bracket_player())
            players = self.players()
            if players is None:
                raise self.error("bare RAT needs a game form to expand", tok)
            return rat_all(players)
        if word == "play":
            self.advance()
            return self.play_atom()
        if word == "prop":
            self.advance()
            self.expect("(")
            atom_tok = self.peek()
            atom = self.name("atom name")
            self.expect(")")
            if self.form is not None and atom not in self.form.extra_atoms:
                raise VocabularyError(
                    f"unknown atom {atom!r} at position {atom_tok[2]}")
            return Prop(atom)
        raise self.error(f"unexpected {word!r}")

    def play_atom(self):
        self.expect("(")
        if self.peek()[0] == "(":
            open_tok = self.advance()
            names = [self.name("strategy")]
            while self.peek()[0] == ",":
                self.advance()
                names.append(self.name("strategy"))
            self.expect(")")
            self.expect(")")
            players = self.players()
            if players is None:
                raise self.error("profile play(...) needs a game form", open_tok)
            if len(names) != len(players):
                raise VocabularyError(
                    f"profile at position {open_tok[2]} has {len(names)} "
                    f"strategies for {len(players)} players")
            for p, s in zip(players, names):
                if s not in self.form.strategies[p]:
                    raise VocabularyError(f"unknown strategy {s!r} for player {p!r}")
            return play_profile(players, names)
        p_tok = self.peek()
        player = self.name("player")
        self.check_player(player, p_tok)
        self.expect(",")
        s_tok = self.peek()
        strategy = self.name("strategy")
        self.expect(")")
        if self.form is not None and strategy not in self.form.strategies[player]:
            raise VocabularyError(
                f"unknown strategy {strategy!r} for player {player!r} "
                f"at position {s_tok[2]}")
        return Play(player, strategy)


def parse_formula(text: str, form=None) -> Formula:
    """Parse concrete syntax into a core AST.

    ``form`` supplies the vocabulary (anything with ``players``,
    ``strategies`` and ``extra_atoms``).  Without it, names are not checked
    and the constructs that need the player list (bare ``RAT``, ``EB``,
    profile ``play``) are rejected.
    """
    return _Parser(text, form).parse()


# -- rendering -----------------------------------------------------------------

# precedence levels: 0 implication, 1 or, 2 and, 3 unary/atom
_IMP, _OR, _AND, _UNARY = range(4)


def _match_or(f):
    if isinstance(f, Not) and isinstance(f.sub, And):
        a, b = f.sub.left, f.sub.right
        if isinstance(a, Not) and isinstance(b, Not):
            return a.sub, b.sub
    return None


def _match_implies(f):
    if isinstance(f, Not) and isinstance(f.sub, And) and isinstance(f.sub.right, Not):
        return f.sub.left, f.sub.right.sub
    return None


def _match_possible(f):
    if (isinstance(f, Not) and isinstance(f.sub, Believes)
            and isinstance(f.sub.sub, Not)):
        return f.sub.player, f.sub.sub.sub
    return None


def render_formula(f: Formula, form=None) -> str:
    """Print ``f`` in the concrete syntax accepted by :func:`parse_formula`.

    Abbreviations are folded back where the pattern is unambiguous
    (``or``, ``->``, ``P[i]``, and bare ``RAT`` when ``form`` is given).
    """
    rat = rat_all(form.players) if form is not None else None

    def wrap(text, level, needed):
        return f"({text})" if level < needed else text

    def go(g, needed):
        if rat is not None and g == rat and len(form.players) > 1:
            return "RAT"
        if isinstance(g, Play):
            return f"play({g.player},{g.strategy})"
        if isinstance(g, Prop):
            return f"prop({g.atom})"
        if isinstance(g, Rat):
            return f"RAT[{g.player}]"
        if isinstance(g, And):
            text = f"{go(g.left, _UNARY)} and {go(g.right, _AND)}"
            return wrap(text, _AND, needed)
        if isinstance(g, Believes):
            return f"B[{g.player}] {go(g.sub, _UNARY)}"
        if isinstance(g, CommonBelief):
            return f"CB {go(g.sub, _UNARY)}"
        if isinstance(g, Not):
            pos = _match_possible(g)
            if pos is not None:
                return f"P[{pos[0]}] {go(pos[1], _UNARY)}"
            pair = _match_or(g)
            if pair is not None:
                text = f"{go(pair[0], _AND)} or {go(pair[1], _OR)}"
                return wrap(text, _OR, needed)
            pair = _match_implies(g)
            if pair is not None:
                text = f"{go(pair[0], _OR)} -> {go(pair[1], _IMP)}"
                return wrap(text, _IMP, needed)
            return f"not {go(g.sub, _UNARY)}"
        raise TypeError(f"not a formula: {g!r}")

    return go(f, _IMP)
