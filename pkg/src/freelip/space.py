"""Finite pointed metric spaces: validation and elementary geometry.

Distances live in one of two number modes. Exact mode keeps entries as
fractions.Fraction, so betweenness and alignment are literal equality
tests. Float mode keeps binary floats and compares through a relative
tolerance (default 1e-9 of the largest distance). Euclidean point clouds
with rational coordinates additionally carry their coordinates, and
alignment questions on them are decided exactly through collinearity,
independent of floating-point rounding.

The quantities computed here are the raw material for the classification
layer: the excess d(r,p) + d(r,q) - d(p,q) of a point over a pair, metric
segments, aligned triples, the concavity modulus (minimum excess away
from both endpoints), and the snowflake transform d -> d^alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from mpmath import mp

Num = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"

DEFAULT_REL_TOL = 1e-9
# Float-mode margins below this fraction of the scale trigger a recheck
# at twice the working precision when the space carries enough provenance
# (a snowflake of a known base, or exact coordinates).
RECHECK_REL_MARGIN = 1e-6
_RECHECK_DPS = 34  # ~2x IEEE double


class SpaceError(Exception):
    """Base class for metric-space domain errors."""


class SamePoint(SpaceError):
    pass


class UnknownLabel(SpaceError):
    pass


class BadExponent(SpaceError):
    pass


class BadGrid(SpaceError):
    pass


@dataclass(frozen=True)
class Violation:
    """One violated metric axiom, with the witnessing indices."""

    kind: str  # not_square | bad_labels | bad_base | asymmetric | negative |
    #            nonzero_diagonal | zero_distance | triangle | bad_entry
    i: int | None = None
    j: int | None = None
    k: int | None = None
    deficit: Num | None = None

    def describe(self) -> str:
        parts = [self.kind]
        idx = [v for v in (self.i, self.j, self.k) if v is not None]
        if idx:
            parts.append("at " + ",".join(str(v) for v in idx))
        if self.deficit is not None:
            parts.append(f"deficit {self.deficit}")
        return " ".join(parts)


class ValidationError(SpaceError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(v.describe() for v in self.violations))


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A validated finite pointed metric space.

    Immutable after construction; every operation in this package is a
    pure function over it, safe for concurrent use. Build instances via
    :func:`validate` (or the loaders in :mod:`freelip.formats`), never
    directly, so the invariants are guaranteed to hold.
    """

    labels: tuple[str, ...]
    base_index: int
    dist: tuple[tuple[Num, ...], ...]
    mode: str = EXACT
    rel_tol: float = DEFAULT_REL_TOL
    coords: tuple[tuple[Fraction, ...], ...] | None = None
    coord_norm: str | None = None  # "l2" | "linf" | "l1"
    meta: Mapping = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def base_label(self) -> str:
        return self.labels[self.base_index]

    @property
    def scale(self) -> Num:
        return max((d for row in self.dist for d in row), default=0)

    @property
    def abs_tol(self) -> float:
        """Absolute comparison tolerance; zero in exact mode."""
        if self.mode == EXACT:
            return 0.0
        return self.rel_tol * float(self.scale)

    def index(self, point: Union[int, str]) -> int:
        if isinstance(point, int):
            if not 0 <= point < self.n:
                raise UnknownLabel(f"index {point} out of range")
            return point
        try:
            return self.labels.index(point)
        except ValueError:
            raise UnknownLabel(f"no point labeled {point!r}") from None

    def d(self, p: Union[int, str], q: Union[int, str]) -> Num:
        return self.dist[self.index(p)][self.index(q)]

    def excess_raw(self, r: int, p: int, q: int) -> Num:
        return self.dist[r][p] + self.dist[r][q] - self.dist[p][q]

    def with_base(self, base: Union[int, str]) -> "FiniteMetricSpace":
        """Same space re-pointed at another base point."""
        return FiniteMetricSpace(
            labels=self.labels,
            base_index=self.index(base),
            dist=self.dist,
            mode=self.mode,
            rel_tol=self.rel_tol,
            coords=self.coords,
            coord_norm=self.coord_norm,
            meta=self.meta,
        )

    # -- betweenness ---------------------------------------------------

    def _has_exact_l2_coords(self) -> bool:
        return self.coords is not None and self.coord_norm == "l2"

    def is_between(self, r: Union[int, str], p: Union[int, str], q: Union[int, str]) -> bool:
        """Does r lie (weakly) between p and q, i.e. excess(r;p,q) = 0?"""
        ri, pi, qi = self.index(r), self.index(p), self.index(q)
        if pi == qi:
            raise SamePoint("betweenness needs two distinct endpoints")
        if ri == pi or ri == qi:
            return True
        if self.mode == EXACT:
            return self.excess_raw(ri, pi, qi) == 0
        if self._has_exact_l2_coords():
            # Strictly convex norm: metric and linear alignment coincide,
            # and rational coordinates decide the latter exactly.
            return _linearly_between(self.coords, ri, pi, qi)
        e = float(self.excess_raw(ri, pi, qi))
        tol = self.abs_tol
        if e <= tol:
            return True
        if e < RECHECK_REL_MARGIN * float(self.scale):
            hp = _highprec_excess(self, ri, pi, qi)
            if hp is not None:
                return hp <= mp.mpf(float(self.scale)) * mp.mpf(self.rel_tol) ** 2
        return False


# -- construction ------------------------------------------------------


def validate(
    matrix: Sequence[Sequence],
    labels: Sequence[str],
    base: Union[int, str] = 0,
    mode: str = EXACT,
    rel_tol: float = DEFAULT_REL_TOL,
    coords: Mapping[str, Sequence] | None = None,
    coord_norm: str | None = None,
    meta: Mapping | None = None,
) -> FiniteMetricSpace:
    """Check every metric axiom and return the validated space.

    All violations are collected and reported together in the raised
    ValidationError, each with the witnessing indices: asymmetry,
    negative entries, nonzero diagonal, zero distance between distinct
    labels, and triangle violations (with their deficit). In float mode
    a triangle deficit within the tolerance is repaired silently by
    accepting the matrix as-is.
    """
    violations: list[Violation] = []
    labels = tuple(str(x) for x in labels)
    n = len(labels)
    if len(set(labels)) != n or n == 0:
        violations.append(Violation("bad_labels"))
    rows = list(matrix)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise ValidationError([Violation("not_square"), *violations])

    def coerce(v) -> Num:
        if mode == EXACT:
            if isinstance(v, float):
                return Fraction(v)
            return Fraction(v)
        return float(v)

    try:
        d = tuple(tuple(coerce(v) for v in row) for row in rows)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError([Violation("bad_entry"), *violations]) from exc

    try:
        base_index = labels.index(base) if isinstance(base, str) else int(base)
    except ValueError:
        base_index = -1
    if not 0 <= base_index < n:
        violations.append(Violation("bad_base"))
        base_index = 0

    scale = max((abs(v) for row in d for v in row), default=0)
    tol = 0 if mode == EXACT else rel_tol * float(scale)

    for i in range(n):
        if d[i][i] != 0:
            violations.append(Violation("nonzero_diagonal", i=i))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                violations.append(Violation("asymmetric", i=i, j=j))
            if d[i][j] < 0:
                violations.append(Violation("negative", i=i, j=j))
            elif d[i][j] <= tol and (mode == FLOAT or d[i][j] == 0):
                violations.append(Violation("zero_distance", i=i, j=j))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if k == i or k == j:
                    continue
                deficit = d[i][j] - d[i][k] - d[k][j]
                if deficit > tol:
                    violations.append(Violation("triangle", i=i, j=j, k=k, deficit=deficit))
    if violations:
        raise ValidationError(violations)

    frozen_coords = None
    if coords is not None:
        frozen_coords = tuple(
            tuple(Fraction(c) for c in coords[lab]) for lab in labels
        )
    return FiniteMetricSpace(
        labels=labels,
        base_index=base_index,
        dist=d,
        mode=mode,
        rel_tol=rel_tol,
        coords=frozen_coords,
        coord_norm=coord_norm,
        meta=dict(meta) if meta else {},
    )


# -- elementary quantities ---------------------------------------------


@dataclass(frozen=True)
class ExcessValue:
    """The excess d(r,p) + d(r,q) - d(p,q); zero iff r lies between p and q."""

    r: str
    p: str
    q: str
    value: Num


def excess(
    space: FiniteMetricSpace,
    r: Union[int, str],
    p: Union[int, str],
    q: Union[int, str],
) -> ExcessValue:
    ri, pi, qi = space.index(r), space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("excess needs two distinct endpoints")
    return ExcessValue(
        r=space.labels[ri],
        p=space.labels[pi],
        q=space.labels[qi],
        value=space.excess_raw(ri, pi, qi),
    )


def metric_segment(
    space: FiniteMetricSpace, p: Union[int, str], q: Union[int, str]
) -> tuple[str, ...]:
    """All points with zero excess over (p,q), in index order.

    Always contains p and q; it may contain nothing else.
    """
    pi, qi = space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("segment needs two distinct endpoints")
    return tuple(
        space.labels[ri] for ri in range(space.n) if space.is_between(ri, pi, qi)
    )


def strict_middles(
    space: FiniteMetricSpace, p: Union[int, str], q: Union[int, str]
) -> tuple[str, ...]:
    """Points strictly between p and q, in index order."""
    pi, qi = space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("betweenness needs two distinct endpoints")
    return tuple(
        space.labels[ri]
        for ri in range(space.n)
        if ri not in (pi, qi) and space.is_between(ri, pi, qi)
    )


def aligned_triples(space: FiniteMetricSpace) -> tuple[tuple[str, str, str], ...]:
    """All aligned triples as (middle, end1, end2), lexicographic by index.

    Three distinct points are aligned when one of them lies strictly
    between the other two; at most one point of a triple can do so.
    """
    out: list[tuple[str, str, str]] = []
    n = space.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for mid, e1, e2 in ((i, j, k), (j, i, k), (k, i, j)):
                    if space.is_between(mid, e1, e2):
                        out.append(
                            (space.labels[mid], space.labels[e1], space.labels[e2])
                        )
                        break
    out.sort(key=lambda t: tuple(space.index(x) for x in t))
    return tuple(out)


@dataclass(frozen=True)
class ModulusEntry:
    eps: Num
    delta: Num  # math.inf when no admissible point exists
    witness: str | None


@dataclass(frozen=True)
class ModulusTable:
    """Concavity modulus of a pair: delta(eps) = min excess at distance
    >= eps from both endpoints, with the attaining witness."""

    p: str
    q: str
    entries: tuple[ModulusEntry, ...]

    def delta(self, eps) -> Num:
        for entry in self.entries:
            if entry.eps == eps:
                return entry.delta
        raise KeyError(eps)


def concavity_modulus(
    space: FiniteMetricSpace,
    p: Union[int, str],
    q: Union[int, str],
    eps_grid: Iterable,
) -> ModulusTable:
    """Tabulate delta(eps) over the given grid of positive eps values.

    delta(eps) is nondecreasing in eps and is reported as math.inf when
    no point of the space stays eps away from both endpoints (the
    condition is then vacuous, not an error).
    """
    pi, qi = space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("modulus needs two distinct endpoints")
    grid = list(eps_grid)
    if not grid:
        raise BadGrid("eps grid must be nonempty")
    entries = []
    for eps in grid:
        eps_n: Num = float(eps) if space.mode == FLOAT else Fraction(eps)
        if eps_n <= 0:
            raise BadGrid("eps values must be positive")
        best: Num | None = None
        witness: int | None = None
        for ri in range(space.n):
            if space.dist[ri][pi] >= eps_n and space.dist[ri][qi] >= eps_n:
                val = space.excess_raw(ri, pi, qi)
                if best is None or val < best:
                    best, witness = val, ri
        if best is None:
            entries.append(ModulusEntry(eps=eps_n, delta=math.inf, witness=None))
        else:
            entries.append(
                ModulusEntry(eps=eps_n, delta=best, witness=space.labels[witness])
            )
    return ModulusTable(p=space.labels[pi], q=space.labels[qi], entries=tuple(entries))


def holder_transform(space: FiniteMetricSpace, alpha) -> FiniteMetricSpace:
    """Snowflake the space: replace every distance d by d**alpha, 0<alpha<1.

    The output is always a float-mode space (rational distances rarely
    have rational powers); when the input was exact the mode change is
    recorded in the output metadata. Subadditivity of t -> t**alpha makes
    the result a metric with strictly concave triangles, so the output
    has no aligned triples; near-marginal float verdicts on it are
    re-derived from the retained base space at twice the precision.
    """
    alpha_f = Fraction(alpha)
    if not 0 < alpha_f < 1:
        raise BadExponent("snowflake exponent must lie strictly between 0 and 1")
    a = float(alpha_f)
    matrix = [
        [0.0 if i == j else float(space.dist[i][j]) ** a for j in range(space.n)]
        for i in range(space.n)
    ]
    meta = {
        "holder": {"alpha": alpha_f, "base": space},
    }
    if space.mode == EXACT:
        meta["mode_change"] = "exact input raised to an irrational-in-general power; output is float"
    rel_tol = space.rel_tol if space.mode == FLOAT else DEFAULT_REL_TOL
    return validate(
        matrix,
        space.labels,
        base=space.base_index,
        mode=FLOAT,
        rel_tol=rel_tol,
        meta=meta,
    )


# -- exact / high-precision helpers ------------------------------------


def _linearly_between(
    coords: Sequence[Sequence[Fraction]], ri: int, pi: int, qi: int
) -> bool:
    """Exact test: r = p + t(q-p) for some rational t in [0,1]."""
    rp = [a - b for a, b in zip(coords[ri], coords[pi])]
    qp = [a - b for a, b in zip(coords[qi], coords[pi])]
    for a in range(len(rp)):
        for b in range(a + 1, len(rp)):
            if rp[a] * qp[b] != rp[b] * qp[a]:
                return False
    num = sum(a * b for a, b in zip(rp, qp))
    den = sum(b * b for b in qp)
    if den == 0:
        return False  # p == q cannot happen in a validated space
    t = num / den
    if not 0 <= t <= 1:
        return False
    # Collinearity of all 2x2 minors plus a matching projection pins r.
    return all(rv == t * qv for rv, qv in zip(rp, qp))


def _highprec_distance(space: FiniteMetricSpace, i: int, j: int):
    if space._has_exact_l2_coords():
        sq = sum(
            (a - b) ** 2 for a, b in zip(space.coords[i], space.coords[j])
        )
        return mp.sqrt(mp.mpf(sq.numerator) / mp.mpf(sq.denominator))
    v = space.dist[i][j]
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / mp.mpf(v.denominator)
    return mp.mpf(v)


def _highprec_excess(space: FiniteMetricSpace, ri: int, pi: int, qi: int):
    """Excess recomputed at ~2x double precision, or None when the space
    carries no provenance that would beat its own float matrix."""
    holder = space.meta.get("holder") if space.meta else None
    with mp.workdps(_RECHECK_DPS):
        if holder is not None:
            base: FiniteMetricSpace = holder["base"]
            al = holder["alpha"]
            a = mp.mpf(al.numerator) / mp.mpf(al.denominator)
            return (
                _highprec_distance(base, ri, pi) ** a
                + _highprec_distance(base, ri, qi) ** a
                - _highprec_distance(base, pi, qi) ** a
            )
        if space._has_exact_l2_coords():
            return (
                _highprec_distance(space, ri, pi)
                + _highprec_distance(space, ri, qi)
                - _highprec_distance(space, pi, qi)
            )
    return None
