"""Exact linear programming over the rationals.

A dense-tableau primal simplex with Bland's rule (anti-cycling), used as
the engine for the polytope oracle and the norm-attainment computations.
All arithmetic is fractions.Fraction, so feasibility and optimality
verdicts are exact. Problems here are tiny (tens of rows), so clarity
wins over sparse cleverness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPFailure(Exception):
    """Internal solver failure; indicates a bug, never a user error."""


@dataclass(frozen=True)
class LPResult:
    status: str
    objective: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    # Infeasible case: row multipliers y with y.A <= 0 componentwise,
    # y.b > 0, and y_i <= 0 on inequality rows (certificate of a Farkas
    # alternative for the system A_ub x <= b_ub, A_eq x = b_eq, x >= 0).
    farkas: tuple[Fraction, ...] | None = None


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def solve_nonneg(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    maximize: bool = False,
) -> LPResult:
    """Optimize c.x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0."""
    n = len(c)
    cvec = [_frac(v) for v in c]

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    kinds: list[str] = []
    for a, b in zip(a_ub, b_ub, strict=True):
        rows.append([_frac(v) for v in a])
        rhs.append(_frac(b))
        kinds.append("ub")
    for a, b in zip(a_eq, b_eq, strict=True):
        rows.append([_frac(v) for v in a])
        rhs.append(_frac(b))
        kinds.append("eq")
    m = len(rows)
    for row in rows:
        if len(row) != n:
            raise LPFailure("row length does not match objective length")

    flipped = [False] * m
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
            flipped[i] = True

    # Columns: structural, then one slack per ub row, then artificials on
    # rows lacking a unit start (equalities and flipped inequalities).
    ncols = n
    slack_col: list[int | None] = [None] * m
    for i in range(m):
        if kinds[i] == "ub":
            slack_col[i] = ncols
            ncols += 1
    art_col: list[int | None] = [None] * m
    for i in range(m):
        if kinds[i] == "eq" or flipped[i]:
            art_col[i] = ncols
            ncols += 1
    art_set = {j for j in art_col if j is not None}

    tab = [[ZERO] * ncols for _ in range(m)]
    for i in range(m):
        trow = tab[i]
        for j, v in enumerate(rows[i]):
            trow[j] = v
        sc = slack_col[i]
        if sc is not None:
            trow[sc] = -ONE if flipped[i] else ONE
        ac = art_col[i]
        if ac is not None:
            trow[ac] = ONE

    basis = [art_col[i] if art_col[i] is not None else slack_col[i] for i in range(m)]
    b = rhs[:]

    def pivot(pr: int, pc: int) -> None:
        prow = tab[pr]
        inv = ONE / prow[pc]
        if inv != ONE:
            prow = [v * inv for v in prow]
            tab[pr] = prow
            b[pr] *= inv
        bpr = b[pr]
        for r in range(len(tab)):
            if r == pr:
                continue
            f = tab[r][pc]
            if f:
                trow = tab[r]
                tab[r] = [tv - f * pv for tv, pv in zip(trow, prow)]
                b[r] -= f * bpr
        basis[pr] = pc

    def run(cost: list[Fraction], blocked: set[int]) -> str:
        # Bland: entering = lowest-index column with negative reduced cost;
        # leaving = min ratio, ties broken by lowest basic index.
        while True:
            cb = [(r, cost[bi]) for r, bi in enumerate(basis) if cost[bi]]
            enter = -1
            for j in range(ncols):
                if j in blocked or j in basis:
                    continue
                red = cost[j]
                for r, cr in cb:
                    red -= cr * tab[r][j]
                if red < 0:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            leave = -1
            best: Fraction | None = None
            for r in range(len(tab)):
                a = tab[r][enter]
                if a > 0:
                    ratio = b[r] / a
                    if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                        best = ratio
                        leave = r
            if leave < 0:
                return UNBOUNDED
            pivot(leave, enter)

    if art_set:
        cost1 = [ZERO] * ncols
        for j in art_set:
            cost1[j] = ONE
        if run(cost1, blocked=set()) != OPTIMAL:
            raise LPFailure("phase one cannot be unbounded")
        infeas = sum((b[r] for r, bi in enumerate(basis) if bi in art_set), ZERO)
        if infeas > 0:
            # Duals from the unit probe columns: tab[:, e_i] = B^-1 e_i.
            y = []
            for i in range(m):
                probe = art_col[i] if art_col[i] is not None else slack_col[i]
                yi = ZERO
                for r, bi in enumerate(basis):
                    if bi in art_set:
                        yi += tab[r][probe]
                y.append(yi)
            farkas = tuple(-y[i] if flipped[i] else y[i] for i in range(m))
            return LPResult(INFEASIBLE, farkas=farkas)
        # Drive remaining artificials out of the basis; drop redundant rows.
        r = 0
        while r < len(tab):
            if basis[r] in art_set:
                for j in range(ncols):
                    if j not in art_set and tab[r][j] != 0:
                        pivot(r, j)
                        break
                else:
                    del tab[r], b[r], basis[r]
                    continue
            r += 1

    cost2 = [ZERO] * ncols
    for j in range(n):
        cost2[j] = -cvec[j] if maximize else cvec[j]
    status = run(cost2, blocked=art_set)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [ZERO] * n
    for r, bi in enumerate(basis):
        if bi < n:
            x[bi] = b[r]
    obj = sum((cv * xv for cv, xv in zip(cvec, x)), ZERO)
    return LPResult(OPTIMAL, objective=obj, x=tuple(x))


def solve_free(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    maximize: bool = False,
) -> LPResult:
    """Same LP with x unrestricted in sign (internally x = x+ - x-)."""
    n = len(c)
    c2 = [_frac(v) for v in c] + [-_frac(v) for v in c]
    ub2 = [list(a) + [-_frac(v) for v in a] for a in a_ub]
    eq2 = [list(a) + [-_frac(v) for v in a] for a in a_eq]
    res = solve_nonneg(c2, ub2, b_ub, eq2, b_eq, maximize=maximize)
    if res.status != OPTIMAL:
        return res
    assert res.x is not None
    x = tuple(res.x[j] - res.x[n + j] for j in range(n))
    return LPResult(OPTIMAL, objective=res.objective, x=x)


def feasible_combination(a_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Feasibility of a_eq x = b_eq, x >= 0 (phase one only)."""
    n = len(a_eq[0]) if a_eq else 0
    return solve_nonneg([ZERO] * n, a_eq=a_eq, b_eq=b_eq)
