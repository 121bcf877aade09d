"""Exact linear programming over the rationals.

Dense two-phase simplex with Bland's rule on ``Fraction`` entries; small
problems only (the Nash search solves one LP per support profile).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

__all__ = ["LPResult", "maximize"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Optional[Fraction] = None
    x: Optional[List[Fraction]] = None


def _pivot(T: List[List[Fraction]], basis: List[int], r: int, c: int) -> None:
    row = T[r]
    piv = row[c]
    if piv != _ONE:
        T[r] = row = [v / piv if v else v for v in row]
    nonzero = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f != _ZERO:
                for j in nonzero:
                    other[j] -= f * row[j]
    basis[r] = c


def _simplex(T, basis, ncols, allowed) -> str:
    """Maximize the objective in the last row of ``T`` (stored as -c).

    Columns outside ``allowed`` never enter.  Returns "optimal" or "unbounded".
    """
    obj = T[-1]
    while True:
        obj = T[-1]
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        leave = None
        for i in range(len(T) - 1):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        _pivot(T, basis, leave, enter)


def maximize(c: Sequence, A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
             A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> LPResult:
    """Maximize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    rows = []  # (coeffs, rhs, kind) with kind in {"le", "eq", "ge"}
    for a, b in zip(A_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), "le"))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), "eq"))
    for coeffs, _, _ in rows:
        if len(coeffs) != n:
            raise ValueError("constraint width does not match objective")
    # make every right-hand side nonnegative
    norm = []
    for coeffs, rhs, kind in rows:
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
            kind = {"le": "ge", "ge": "le", "eq": "eq"}[kind]
        norm.append((coeffs, rhs, kind))

    m = len(norm)
    n_slack = sum(1 for _, _, k in norm if k != "eq")
    n_art = sum(1 for _, _, k in norm if k != "le")
    ncols = n + n_slack + n_art
    T: List[List[Fraction]] = []
    basis: List[int] = []
    s_col = n
    a_col = n + n_slack
    art_cols = []
    for coeffs, rhs, kind in norm:
        row = coeffs + [_ZERO] * (n_slack + n_art) + [rhs]
        if kind == "le":
            row[s_col] = _ONE
            basis.append(s_col)
            s_col += 1
        else:
            if kind == "ge":
                row[s_col] = -_ONE
                s_col += 1
            row[a_col] = _ONE
            basis.append(a_col)
            art_cols.append(a_col)
            a_col += 1
        T.append(row)

    allowed = [True] * ncols
    if art_cols:
        # phase 1: maximize -(sum of artificials)
        obj = [_ZERO] * (ncols + 1)
        for j in art_cols:
            obj[j] = _ONE
        for i, b in enumerate(basis):
            if b in art_cols:
                obj = [o - v for o, v in zip(obj, T[i])]
        T.append(obj)
        _simplex(T, basis, ncols, allowed)
        if T[-1][-1] != 0:
            return LPResult("infeasible")
        T.pop()
        art = set(art_cols)
        for i in range(m):
            if basis[i] in art:
                col = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
                if col is not None:
                    _pivot(T, basis, i, col)
        keep = [i for i in range(m) if basis[i] not in art]
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]
        for j in art_cols:
            allowed[j] = False

    obj = [-Fraction(v) for v in c] + [_ZERO] * (ncols - n) + [_ZERO]
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [o - f * v for o, v in zip(obj, T[i])]
    T.append(obj)
    status = _simplex(T, basis, ncols, allowed)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [_ZERO] * ncols
    for i, b in enumerate(basis):
        x[b] = T[i][-1]
    return LPResult("optimal", T[-1][-1], x[:n])
