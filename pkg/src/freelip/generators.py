"""Finite truncations of the reference example families.

Three families recur throughout the test surface of this package:

* a planar double spiral around a unit pair (p, q): points p_n drift
  into p and q_n into q inside shrinking balls of radius lambda**(2n)
  centered at p + lambda**n (q-p) and its mirror, chosen with exact
  rational coordinates and verified non-collinear, so the space has no
  aligned triples at any depth while the excess ratios decay;
* a sup-norm family {e, p, q_n} whose excesses are exactly 2/n: no point
  ever lies between p and e, yet the concavity modulus collapses as the
  truncation deepens (the finite shadow of a non-compact counterexample);
* a Euclidean family {0, e1, r_n} that is concave but, by construction,
  cannot be a snowflake of any metric: its distances violate the triangle
  inequality after being raised to a power 1/alpha > some lambda_n.

All generators are deterministic in (parameters, seed), nest across
depths (the depth-N space is a prefix of the depth-M one for N < M), and
emit spaces that pass validation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Mapping, Sequence

from mpmath import mp

from .space import FiniteMetricSpace, SpaceError, holder_transform, validate
from .classify import UnknownFamily

REJECTION_BUDGET = 1000
L2_MARGIN = Fraction(1, 2**40)
_BISECTION_STEPS = 64
_CERT_DPS = 50


class BadLambda(SpaceError):
    pass


class BadDepth(SpaceError):
    pass


class BadSequences(SpaceError):
    pass


class ConstraintUnsatisfiable(SpaceError):
    pass


class RejectionBudgetExceeded(SpaceError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    """A named generator family with parameters; generate(depth) yields
    the finite truncation and probe_label(p, q, n) names the n-th probe
    point of the ordered anchor pair (p, q), or None when that side of
    the family is empty."""

    family: str
    params: Mapping = field(default_factory=dict)

    def generate(self, depth: int) -> FiniteMetricSpace:
        if self.family == "planar_spiral":
            return gen_planar_spiral(
                self.params["lam"], depth, self.params.get("seed", 0)
            )
        if self.family == "planar_spiral_one_sided":
            return gen_planar_spiral_one_sided(
                self.params["lam"], depth, self.params.get("seed", 0)
            )
        if self.family == "c0_counterexample":
            return gen_c0_counterexample(depth)
        if self.family == "l2_nonholder":
            return gen_l2_nonholder(
                self.params.get("a_seq"), self.params.get("lam_seq"), depth
            )
        if self.family == "holder_of":
            base: FamilySpec = self.params["base"]
            return holder_transform(base.generate(depth), self.params["alpha"])
        if self.family == "constant":
            return self.params["space"]
        raise UnknownFamily(f"unknown family id {self.family!r}")

    def probe_label(self, p: str, q: str, n: int) -> str | None:
        if self.family in ("planar_spiral", "planar_spiral_one_sided"):
            if (p, q) == ("p", "q"):
                return f"q{n}"
            if (q, p) == ("p", "q"):
                return None if self.family.endswith("one_sided") else f"p{n}"
            raise UnknownFamily(f"anchor pair must be ('p','q'), got {(p, q)!r}")
        if self.family == "c0_counterexample":
            if {p, q} != {"e", "p"}:
                raise UnknownFamily(f"anchor pair must be {{'p','e'}}, got {(p, q)!r}")
            return f"q{n}"
        if self.family == "l2_nonholder":
            if {p, q} != {"0", "e1"}:
                raise UnknownFamily(f"anchor pair must be {{'0','e1'}}, got {(p, q)!r}")
            return f"r{n}"
        if self.family == "holder_of":
            return self.params["base"].probe_label(p, q, n)
        if self.family == "constant":
            return self.params["probe"]
        raise UnknownFamily(f"unknown family id {self.family!r}")


# -- planar spiral ------------------------------------------------------

# In-ball sampling window, as fractions of the ball radius lambda**(2n):
# the offset perpendicular to the pq axis sits in a thin annulus and the
# tangential offset stays small. Any choice inside the open ball would be
# admissible; pinning the geometry keeps the excess ratios of different
# depths comparable, so decay factors across depths reflect lambda alone
# rather than sampling luck.
_PERP_LO = Fraction(70, 100)
_PERP_SPAN = Fraction(5, 1000)
_TANG_MAX = Fraction(2, 100)
_GRID = 2**20


def _collinear(a, b, c) -> bool:
    return (b[0] - a[0]) * (c[1] - a[1]) == (b[1] - a[1]) * (c[0] - a[0])


def _spiral_points(lam: Fraction, depth: int, seed, one_sided: bool):
    if not isinstance(lam, Fraction):
        lam = Fraction(lam)
    if not 0 < lam < 1:
        raise BadLambda("lambda must be a rational strictly between 0 and 1")
    if depth < 1:
        raise BadDepth("depth must be at least 1")
    rng = random.Random(seed)
    p = (Fraction(0), Fraction(0))
    q = (Fraction(1), Fraction(0))
    pts: dict[str, tuple[Fraction, Fraction]] = {"p": p, "q": q}

    def sample(center_x: Fraction, radius: Fraction) -> tuple[Fraction, Fraction]:
        for _ in range(REJECTION_BUDGET):
            gamma = _PERP_LO + _PERP_SPAN * Fraction(rng.randrange(_GRID), _GRID)
            s = _TANG_MAX * Fraction(rng.randrange(-_GRID, _GRID + 1), _GRID)
            sign = 1 if rng.random() < 0.5 else -1
            cand = (center_x + s * radius, sign * gamma * radius)
            existing = list(pts.values())
            if any(
                _collinear(cand, existing[a], existing[b])
                for a in range(len(existing))
                for b in range(a + 1, len(existing))
            ):
                continue
            return cand
        raise RejectionBudgetExceeded(
            "could not place a non-collinear point; try another seed"
        )

    for n in range(1, depth + 1):
        radius = lam ** (2 * n)
        if not one_sided:
            pts[f"p{n}"] = sample(lam**n, radius)
        pts[f"q{n}"] = sample(1 - lam**n, radius)
    return pts


def _euclidean_space(
    pts: Mapping[str, tuple[Fraction, ...]], base: str, meta: Mapping | None = None
) -> FiniteMetricSpace:
    labels = list(pts)
    matrix = []
    for a in labels:
        row = []
        for b in labels:
            sq = sum((x - y) ** 2 for x, y in zip(pts[a], pts[b]))
            row.append(sqrt(float(sq)))
        matrix.append(row)
    return validate(
        matrix,
        labels,
        base=base,
        mode="float",
        coords=pts,
        coord_norm="l2",
        meta=meta,
    )


def gen_planar_spiral(lam, depth: int, seed=0) -> FiniteMetricSpace:
    """Both accumulating sequences; labels p, q, p1, q1, ..., pN, qN."""
    pts = _spiral_points(Fraction(lam), depth, seed, one_sided=False)
    meta = {"family": "planar_spiral", "lambda": str(Fraction(lam)), "seed": seed}
    return _euclidean_space(pts, base="p", meta=meta)


def gen_planar_spiral_one_sided(lam, depth: int, seed=0) -> FiniteMetricSpace:
    """Only the q-side sequence; p is an isolated endpoint."""
    pts = _spiral_points(Fraction(lam), depth, seed, one_sided=True)
    meta = {
        "family": "planar_spiral_one_sided",
        "lambda": str(Fraction(lam)),
        "seed": seed,
    }
    return _euclidean_space(pts, base="p", meta=meta)


# -- sup-norm counterexample family -------------------------------------


def gen_c0_counterexample(depth: int) -> FiniteMetricSpace:
    """Points e, p and q_n for 2 <= n <= depth with sup-norm distances.

    Closed forms (q_n has a unit first coordinate and a lone 1 + 1/n
    coordinate in direction n): d(e,p) = 2, d(q_n,e) = d(q_n,p) = 1 + 1/n,
    and d(q_n,q_m) = 1 + 1/min(n,m). Exact mode.
    """
    if depth < 2:
        raise BadDepth("depth must be at least 2")
    labels = ["e", "p"] + [f"q{n}" for n in range(2, depth + 1)]

    def dist(a: str, b: str) -> Fraction:
        if a == b:
            return Fraction(0)
        if {a, b} == {"e", "p"}:
            return Fraction(2)
        if a.startswith("q") and b.startswith("q"):
            m = min(int(a[1:]), int(b[1:]))
            return 1 + Fraction(1, m)
        n = int((a if a.startswith("q") else b)[1:])
        return 1 + Fraction(1, n)

    matrix = [[dist(a, b) for b in labels] for a in labels]
    return validate(
        matrix,
        labels,
        base="e",
        mode="exact",
        meta={"family": "c0_counterexample", "depth": depth},
    )


# -- Euclidean concave non-snowflake family ------------------------------


def _certified_below(a: Fraction, lam: Fraction, b: Fraction, bound: Fraction) -> bool:
    """Certify (a^2+b^2)^(lam/2) + ((1-a)^2+b^2)^(lam/2) <= bound, with a
    numeric guard well under the certification margin."""
    with mp.workdps(_CERT_DPS):
        lam_mp = mp.mpf(lam.numerator) / mp.mpf(lam.denominator)

        def term(x: Fraction) -> mp.mpf:
            return mp.mpf(x.numerator) / mp.mpf(x.denominator)

        val = (term(a**2 + b**2)) ** (lam_mp / 2) + (
            term((1 - a) ** 2 + b**2)
        ) ** (lam_mp / 2)
        guard = mp.mpf(10) ** (-(_CERT_DPS - 10))
        return val < term(bound) - guard


def gen_l2_nonholder(
    a_seq: Sequence | None, lam_seq: Sequence | None, depth: int
) -> FiniteMetricSpace:
    """Points 0, e1 and r_n = a_n e1 + b_n e_n for 2 <= n <= depth.

    Defaults: a_n = 2^-n and lambda_n = 1 + 2^-n. Each b_n is the largest
    64-step dyadic rational whose defining constraint
    (a_n^2+b_n^2)^(lam_n/2) + ((1-a_n)^2+b_n^2)^(lam_n/2) < 1 is certified
    with margin at least 2^-40 in high-precision arithmetic; the margins
    land in the space metadata. Distances are Euclidean floats, while the
    retained rational coordinates make alignment tests exact.
    """
    if depth < 2:
        raise BadDepth("depth must be at least 2")
    ns = list(range(2, depth + 1))
    if a_seq is None:
        a = {n: Fraction(1, 2**n) for n in ns}
    else:
        a = {n: Fraction(v) for n, v in zip(ns, a_seq, strict=True)}
    if lam_seq is None:
        lam = {n: 1 + Fraction(1, 2**n) for n in ns}
    else:
        lam = {n: Fraction(v) for n, v in zip(ns, lam_seq, strict=True)}
    for n in ns:
        if not 0 < a[n] < 1:
            raise BadSequences("a_n must lie strictly between 0 and 1")
        if lam[n] <= 1:
            raise BadSequences("lambda_n must exceed 1")
    for n, m in zip(ns, ns[1:]):
        if not a[m] < a[n]:
            raise BadSequences("a_n must be strictly decreasing")
        if not lam[m] < lam[n]:
            raise BadSequences("lambda_n must be strictly decreasing")

    bound = 1 - L2_MARGIN
    b: dict[int, Fraction] = {}
    margins: dict[str, float] = {}
    for n in ns:
        lo, hi = Fraction(0), Fraction(1)
        for _ in range(_BISECTION_STEPS):
            mid = (lo + hi) / 2
            if _certified_below(a[n], lam[n], mid, bound):
                lo = mid
            else:
                hi = mid
        if lo == 0:
            raise ConstraintUnsatisfiable(
                f"no admissible b at n={n}; the margin bound cannot be met"
            )
        b[n] = lo
        with mp.workdps(2 * _CERT_DPS):
            lam_mp = mp.mpf(lam[n].numerator) / mp.mpf(lam[n].denominator)
            s1 = mp.mpf((a[n] ** 2 + b[n] ** 2).numerator) / mp.mpf(
                (a[n] ** 2 + b[n] ** 2).denominator
            )
            t2 = (1 - a[n]) ** 2 + b[n] ** 2
            s2 = mp.mpf(t2.numerator) / mp.mpf(t2.denominator)
            val = s1 ** (lam_mp / 2) + s2 ** (lam_mp / 2)
            if not val < 1 - mp.mpf(L2_MARGIN.numerator) / mp.mpf(L2_MARGIN.denominator):
                raise ConstraintUnsatisfiable(f"post-hoc recheck failed at n={n}")
            margins[f"r{n}"] = float(1 - val)

    dim = depth
    pts: dict[str, tuple[Fraction, ...]] = {
        "0": tuple(Fraction(0) for _ in range(dim)),
        "e1": tuple(
            Fraction(1) if k == 0 else Fraction(0) for k in range(dim)
        ),
    }
    for n in ns:
        vec = [Fraction(0)] * dim
        vec[0] = a[n]
        vec[n - 1] = b[n]
        pts[f"r{n}"] = tuple(vec)
    meta = {
        "family": "l2_nonholder",
        "depth": depth,
        "margins": margins,
        "lambda_seq": {n: str(lam[n]) for n in ns},
        "a_seq": {n: str(a[n]) for n in ns},
        "b_seq": {n: str(b[n]) for n in ns},
    }
    return _euclidean_space(pts, base="0", meta=meta)


def family_at_depths(spec: FamilySpec, depths: Sequence[int]) -> list[FiniteMetricSpace]:
    """Generate the family at each depth; depths must be increasing.

    The same seed drives every depth, so the shallower spaces are exact
    prefixes (labels and distance sub-matrix) of the deeper ones.
    """
    depths = list(depths)
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise BadDepth("depths must be strictly increasing")
    return [spec.generate(d) for d in depths]
