"""Independent LP oracle for the free-space unit ball over a finite space.

The unit ball of the free space over an n-point space is the convex hull
of the 2*C(n,2) molecule vectors, because the molecules norm the
Lipschitz unit ball: the hull's support function is exactly the
Lipschitz norm. Everything here leans only on that identification plus
exact rational linear programming, so agreement with the geometric
classifier is a genuine cross-check, not a restatement.

Coordinates: an element sum_x a_x (j(x) - j(e)) is stored as the
coefficient vector (a_x) over the non-base points in index order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import simplex
from .space import FiniteMetricSpace, SamePoint, SpaceError

MAX_ORACLE_POINTS = 12


class FloatModeUnsupported(SpaceError):
    pass


class DimensionMismatch(SpaceError):
    pass


class NotDistinct(SpaceError):
    pass


class TooManyPoints(SpaceError):
    pass


@dataclass(frozen=True)
class Molecule:
    """The unit vector (j(p) - j(q)) / d(p,q) in free-space coordinates."""

    p: str
    q: str
    vector: tuple[Fraction, ...]


@dataclass(frozen=True)
class FreeVector:
    """A finitely supported element of the free space, as coefficients
    over the non-base points. Norm is zero exactly for the zero vector."""

    coefficients: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)


@dataclass(frozen=True)
class VertexCertificate:
    vertex: bool
    # vertex: a separating functional phi over non-base points with
    # <phi, u_pq> strictly above <phi, m> for every other molecule m.
    separating: dict[str, Fraction] | None
    margin: Fraction | None
    # non-vertex: convex weights over the other molecules reproducing u_pq.
    weights: dict[tuple[str, str], Fraction] | None


@dataclass(frozen=True)
class DecompositionReport:
    """Split of u_pq through a third point r.

    The vector identity u_pq = w1*u_pr + w2*u_rq with w1 = d(p,r)/d(p,q)
    and w2 = d(r,q)/d(p,q) holds unconditionally; the coefficients form a
    convex combination exactly when r lies between p and q, and their sum
    always equals 1 + excess(r;p,q)/d(p,q).
    """

    p: str
    q: str
    r: str
    w1: Union[Fraction, float]
    w2: Union[Fraction, float]
    coefficient_sum: Union[Fraction, float]
    residual: tuple[Union[Fraction, float], ...]
    is_convex_combination: bool


def _nonbase(space: FiniteMetricSpace) -> list[int]:
    return [i for i in range(space.n) if i != space.base_index]


def _guard(space: FiniteMetricSpace, max_points: int) -> None:
    if space.n > max_points:
        raise TooManyPoints(
            f"oracle guard: {space.n} points exceeds the limit of {max_points}"
        )


def molecule_vector(
    space: FiniteMetricSpace, p: Union[int, str], q: Union[int, str]
) -> Molecule:
    """Coordinates of u_pq over the non-base points, exact in exact mode."""
    pi, qi = space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("a molecule needs two distinct points")
    d = space.dist[pi][qi]
    inv = Fraction(1) / Fraction(d)
    vec = []
    for i in _nonbase(space):
        v = Fraction(0)
        if i == pi:
            v += inv
        if i == qi:
            v -= inv
        vec.append(v)
    return Molecule(p=space.labels[pi], q=space.labels[qi], vector=tuple(vec))


def all_molecules(space: FiniteMetricSpace) -> list[Molecule]:
    """Both orientations of every pair, lexicographic by index pair."""
    out = []
    for i in range(space.n):
        for j in range(space.n):
            if i != j:
                out.append(molecule_vector(space, i, j))
    return out


def _lip_ball_rows(space: FiniteMetricSpace, nonbase: list[int]):
    """Rows of |f(x) - f(y)| <= d(x,y) over variables f_x, x non-base."""
    pos = {x: k for k, x in enumerate(nonbase)}
    nv = len(nonbase)
    a_ub: list[list[Fraction]] = []
    b_ub: list[Fraction] = []
    for ii in range(space.n):
        for jj in range(ii + 1, space.n):
            row = [Fraction(0)] * nv
            if ii in pos:
                row[pos[ii]] = Fraction(1)
            if jj in pos:
                row[pos[jj]] = Fraction(-1)
            d = Fraction(space.dist[ii][jj])
            a_ub.append(row)
            b_ub.append(d)
            a_ub.append([-v for v in row])
            b_ub.append(d)
    return a_ub, b_ub


def free_norm(
    space: FiniteMetricSpace,
    coefficients: Sequence,
    with_witness: bool = False,
    max_points: int = MAX_ORACLE_POINTS,
):
    """Norm of sum_x a_x (j(x) - j(e)) by LP duality.

    Maximizes sum a_x f(x) over the Lipschitz unit ball with f(e) = 0;
    exact in exact mode. With with_witness=True also returns the optimal
    f as a label -> value dict for independent re-checking.
    """
    _guard(space, max_points)
    nonbase = _nonbase(space)
    if isinstance(coefficients, FreeVector):
        coefficients = coefficients.coefficients
    if len(coefficients) != len(nonbase):
        raise DimensionMismatch(
            f"expected {len(nonbase)} coefficients, got {len(coefficients)}"
        )
    coeffs = [Fraction(c) for c in coefficients]
    if not any(coeffs):
        value = Fraction(0) if space.mode == "exact" else 0.0
        return (value, {space.labels[x]: Fraction(0) for x in nonbase}) if with_witness else value
    a_ub, b_ub = _lip_ball_rows(space, nonbase)
    res = simplex.solve_free(coeffs, a_ub, b_ub, maximize=True)
    if res.status != simplex.OPTIMAL:
        raise simplex.LPFailure(f"free norm LP ended {res.status}")
    value = res.objective
    if space.mode != "exact":
        value = float(value)
    if with_witness:
        witness = {space.labels[x]: res.x[k] for k, x in enumerate(nonbase)}
        return value, witness
    return value


def is_vertex(
    space: FiniteMetricSpace,
    p: Union[int, str],
    q: Union[int, str],
    max_points: int = MAX_ORACLE_POINTS,
) -> VertexCertificate:
    """Is u_pq an extreme point of the molecule hull? Decided by LP.

    Feasibility of expressing u_pq as a convex combination of the other
    molecules (the opposite orientation included) is solved exactly; the
    infeasibility multipliers yield a separating functional, which is
    re-verified by direct arithmetic before being returned.
    """
    if space.mode != "exact":
        raise FloatModeUnsupported("the vertex oracle requires exact mode")
    _guard(space, max_points)
    pi, qi = space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("a molecule needs two distinct points")
    target = molecule_vector(space, pi, qi)
    others = [
        m for m in all_molecules(space) if (m.p, m.q) != (target.p, target.q)
    ]
    dim = len(target.vector)
    a_eq = [[m.vector[k] for m in others] for k in range(dim)]
    a_eq.append([Fraction(1)] * len(others))
    b_eq = list(target.vector) + [Fraction(1)]
    res = simplex.feasible_combination(a_eq, b_eq)
    if res.status == simplex.OPTIMAL:
        weights = {
            (m.p, m.q): w for m, w in zip(others, res.x) if w != 0
        }
        _check_combination(target, others, res.x)
        return VertexCertificate(
            vertex=False, separating=None, margin=None, weights=weights
        )
    phi = _separating_from_farkas(res.farkas, target, others)
    if phi is None:
        phi = _separating_by_lp(target, others)
    margin = min(
        _dot(phi, target.vector) - _dot(phi, m.vector) for m in others
    )
    if margin <= 0:
        raise simplex.LPFailure("separating functional failed verification")
    labels = [space.labels[i] for i in _nonbase(space)]
    return VertexCertificate(
        vertex=True,
        separating=dict(zip(labels, phi)),
        margin=margin,
        weights=None,
    )


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _check_combination(target: Molecule, others, weights) -> None:
    dim = len(target.vector)
    for k in range(dim):
        s = sum((w * m.vector[k] for m, w in zip(others, weights)), Fraction(0))
        if s != target.vector[k]:
            raise simplex.LPFailure("combination certificate failed verification")
    if sum(weights) != 1 or any(w < 0 for w in weights):
        raise simplex.LPFailure("combination certificate failed verification")


def _separating_from_farkas(farkas, target: Molecule, others):
    """Turn infeasibility multipliers into a separating functional.

    The multipliers y satisfy y.col <= 0 for every column (m_i; 1) and
    y.(u_pq; 1) > 0, so phi = y[:-1] has <phi, u_pq> > <phi, m_i> for all
    i. Returns None if the certificate does not check out exactly.
    """
    if farkas is None:
        return None
    phi = list(farkas[:-1])
    t_val = _dot(phi, target.vector)
    if all(t_val > _dot(phi, m.vector) for m in others):
        return phi
    return None


def _separating_by_lp(target: Molecule, others):
    """Fallback: maximize the separation margin directly (box-normalized)."""
    dim = len(target.vector)
    nv = dim + 1  # phi plus the margin t
    c = [Fraction(0)] * dim + [Fraction(1)]
    a_ub: list[list[Fraction]] = []
    b_ub: list[Fraction] = []
    for m in others:
        row = [m.vector[k] - target.vector[k] for k in range(dim)] + [Fraction(1)]
        a_ub.append(row)
        b_ub.append(Fraction(0))
    for k in range(dim):
        row = [Fraction(0)] * nv
        row[k] = Fraction(1)
        a_ub.append(row[:])
        b_ub.append(Fraction(1))
        row[k] = Fraction(-1)
        a_ub.append(row)
        b_ub.append(Fraction(1))
    res = simplex.solve_free(c, a_ub, b_ub, maximize=True)
    if res.status != simplex.OPTIMAL or res.objective <= 0:
        raise simplex.LPFailure("separation LP disagreed with the feasibility LP")
    return list(res.x[:dim])


def decomposition_check(
    space: FiniteMetricSpace,
    p: Union[int, str],
    q: Union[int, str],
    r: Union[int, str],
) -> DecompositionReport:
    """Verify u_pq = (d(p,r)/d(p,q)) u_pr + (d(r,q)/d(p,q)) u_rq componentwise."""
    pi, qi, ri = space.index(p), space.index(q), space.index(r)
    if len({pi, qi, ri}) != 3:
        raise NotDistinct("decomposition needs three pairwise distinct points")
    dpq = Fraction(space.dist[pi][qi])
    w1 = Fraction(space.dist[pi][ri]) / dpq
    w2 = Fraction(space.dist[ri][qi]) / dpq
    u_pq = molecule_vector(space, pi, qi).vector
    u_pr = molecule_vector(space, pi, ri).vector
    u_rq = molecule_vector(space, ri, qi).vector
    residual = tuple(
        t - (w1 * a + w2 * b) for t, a, b in zip(u_pq, u_pr, u_rq)
    )
    total = w1 + w2
    if space.mode != "exact":
        w1, w2, total = float(w1), float(w2), float(total)
        residual = tuple(float(v) for v in residual)
        convex = abs(total - 1.0) <= space.rel_tol
    else:
        convex = total == 1
    return DecompositionReport(
        p=space.labels[pi],
        q=space.labels[qi],
        r=space.labels[ri],
        w1=w1,
        w2=w2,
        coefficient_sum=total,
        residual=residual,
        is_convex_combination=convex,
    )
