"""Extremal classification of molecules over finite metric spaces.

A molecule u_pq is the normalized difference of the evaluation
functionals of two distinct points. On a finite (hence compact) space,
u_pq is an extreme point of the free-space unit ball exactly when no
third point lies strictly between p and q, and extreme and preserved
extreme coincide; a space is concave when that holds for every pair.
The strongly-exposed question is governed by the minimum of
excess(r;p,q) / min(d(p,r), d(q,r)) over third points r: the pair fails
to be strongly exposed exactly when that quantity can be made
arbitrarily small, which on a single finite space collapses to it being
zero.

Limit behavior of infinite families (does the minimum decay to zero as
truncations deepen?) is not decidable from finite data; the diagnostics
here report the decay trend across a depth schedule and flag it against
an explicit threshold. Flags are heuristics, not theorems.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .space import (
    FiniteMetricSpace,
    ModulusTable,
    SamePoint,
    concavity_modulus,
    aligned_triples,
    strict_middles,
)

DEFAULT_DEPTHS = (4, 8, 16, 32)
DEFAULT_DECAY_THRESHOLD = 0.1


class UnknownFamily(Exception):
    """Raised when an operation needs a generator-backed family and gets
    something else, or the family does not carry the requested points."""


@dataclass(frozen=True)
class PairVerdict:
    """Classification record for an ordered pair of distinct points."""

    pair: tuple[str, str]
    is_extreme: bool
    witness_middle: str | None
    has_property_z: bool
    min_ratio: Union[Fraction, float]  # inf when no third point exists
    modulus: ModulusTable
    notes: tuple[str, ...]


@dataclass(frozen=True)
class PropertyZResult:
    holds_at_eps: bool
    witness: str | None
    min_ratio: Union[Fraction, float]


@dataclass(frozen=True)
class ConcavityReport:
    pair_verdicts: tuple[PairVerdict, ...]
    is_concave: bool
    violating_triples: tuple[tuple[str, str, str], ...]

    def summary(self) -> dict:
        extreme = sum(1 for v in self.pair_verdicts if v.is_extreme)
        return {
            "pairs": len(self.pair_verdicts),
            "extreme": extreme,
            "non_extreme": len(self.pair_verdicts) - extreme,
            "concave": self.is_concave,
        }


@dataclass(frozen=True)
class DepthRecord:
    depth: int
    min_ratio: Union[Fraction, float]
    strongly_exposed: bool


@dataclass(frozen=True)
class ExposureTrend:
    pair: tuple[str, str]
    records: tuple[DepthRecord, ...]
    limit_property_z_flag: bool
    threshold: float


@dataclass(frozen=True)
class SequenceRecord:
    n: int
    excess: float
    ratio: float  # excess over the distance from the probe to the second point


@dataclass(frozen=True)
class SequenceDiagnostics:
    pair: tuple[str, str]
    records: tuple[SequenceRecord, ...]
    monotone_decreasing: bool
    decay_factor: float | None  # last ratio / first ratio
    flag: bool
    threshold: float

    @property
    def limit_estimate(self) -> float | None:
        return self.records[-1].ratio if self.records else None


def _default_eps_grid(space: FiniteMetricSpace, pi: int, qi: int):
    d = space.dist[pi][qi]
    if space.mode == "exact":
        return [d * Fraction(1, 4), d * Fraction(1, 2), d]
    return [d * 0.25, d * 0.5, d]


def min_excess_ratio(
    space: FiniteMetricSpace, p: Union[int, str], q: Union[int, str]
) -> tuple[Union[Fraction, float], str | None]:
    """min over r of excess(r;p,q) / min(d(p,r), d(q,r)), with witness.

    Returns (inf, None) when the space has no third point. The minimum is
    zero exactly when some point lies strictly between p and q, and it is
    the exact threshold below which the eps-form of property (Z) fails.
    """
    pi, qi = space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("pair must consist of distinct points")
    best = None
    witness = None
    for ri in range(space.n):
        if ri in (pi, qi):
            continue
        denom = min(space.dist[ri][pi], space.dist[ri][qi])
        ratio = space.excess_raw(ri, pi, qi) / denom
        if space.is_between(ri, pi, qi):
            ratio = Fraction(0) if space.mode == "exact" else 0.0
        if best is None or ratio < best:
            best, witness = ratio, space.labels[ri]
    if best is None:
        return math.inf, None
    return best, witness


def classify_pair(
    space: FiniteMetricSpace,
    p: Union[int, str],
    q: Union[int, str],
    eps_grid=None,
) -> PairVerdict:
    """Decide whether the molecule of (p,q) is an extreme point.

    On a finite space this is equivalent to the absence of a strict
    middle point, and extreme, preserved extreme, and the uniform-excess
    condition all coincide. The verdict carries the lexicographically
    first middle point when one exists, the modulus table over eps_grid
    (default: quarter, half, and full pair distance), and the exact
    minimum excess ratio that underlies the strongly-exposed question.
    """
    pi, qi = space.index(p), space.index(q)
    if pi == qi:
        raise SamePoint("pair must consist of distinct points")
    middles = strict_middles(space, pi, qi)
    witness = middles[0] if middles else None
    ratio, _ = min_excess_ratio(space, pi, qi)
    grid = eps_grid if eps_grid is not None else _default_eps_grid(space, pi, qi)
    modulus = concavity_modulus(space, pi, qi, grid)
    if witness is None:
        notes = (
            "no point lies strictly between the endpoints: extreme",
            "finite space: extreme and preserved extreme coincide",
        )
    else:
        notes = (
            f"point {witness!r} lies strictly between the endpoints: "
            "the molecule is a proper convex combination, not extreme",
        )
    return PairVerdict(
        pair=(space.labels[pi], space.labels[qi]),
        is_extreme=witness is None,
        witness_middle=witness,
        has_property_z=witness is not None,
        min_ratio=ratio,
        modulus=modulus,
        notes=notes,
    )


def classify_all(
    space: FiniteMetricSpace,
    eps_grid=None,
    max_workers: int | None = None,
) -> ConcavityReport:
    """Verdicts for every unordered pair, plus the concavity verdict.

    Pairs are deduplicated by the antisymmetry u_qp = -u_pq and reported
    in lexicographic index order. Evaluation may run on a thread pool,
    but results always come back in deterministic pair order.
    """
    pairs = [
        (i, j) for i in range(space.n) for j in range(i + 1, space.n)
    ]
    if max_workers is not None and max_workers > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            verdicts = tuple(
                pool.map(lambda ij: classify_pair(space, ij[0], ij[1], eps_grid), pairs)
            )
    else:
        verdicts = tuple(classify_pair(space, i, j, eps_grid) for i, j in pairs)
    triples = aligned_triples(space)
    return ConcavityReport(
        pair_verdicts=verdicts,
        is_concave=not triples,
        violating_triples=triples,
    )


def property_z(
    space: FiniteMetricSpace,
    p: Union[int, str],
    q: Union[int, str],
    eps,
) -> PropertyZResult:
    """Does some third point r satisfy excess(r;p,q) <= eps * min(d(p,r), d(q,r))?

    Returns the verdict at this eps together with the exact threshold
    min_ratio below which the answer flips to no. On a finite space the
    full property (every eps > 0 admits such an r) holds exactly when
    min_ratio is zero, i.e. when a strict middle point exists.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    ratio, witness = min_excess_ratio(space, p, q)
    holds = ratio <= eps
    return PropertyZResult(
        holds_at_eps=holds,
        witness=witness if holds else None,
        min_ratio=ratio,
    )


def _require_family(family) -> None:
    if not hasattr(family, "generate") or not hasattr(family, "probe_label"):
        raise UnknownFamily(f"not a generator-backed family: {family!r}")


def strongly_exposed_verdict(
    family,
    p: str,
    q: str,
    depths: Sequence[int] = DEFAULT_DEPTHS,
    decay_threshold: float = DEFAULT_DECAY_THRESHOLD,
) -> ExposureTrend:
    """Per-depth strongly-exposed verdicts with a limit-trend flag.

    At each truncation depth the pair is strongly exposed iff its minimum
    excess ratio is positive. The flag marks a decreasing trend (deepest
    value below threshold times the shallowest): the finite-scale shadow
    of losing strong exposure in the limit. A flag is a diagnostic, never
    a proof.
    """
    _require_family(family)
    records = []
    for depth in depths:
        sp = family.generate(depth)
        try:
            pi, qi = sp.index(p), sp.index(q)
        except Exception as exc:
            raise UnknownFamily(
                f"family does not carry points {p!r},{q!r} at depth {depth}"
            ) from exc
        ratio, _ = min_excess_ratio(sp, pi, qi)
        records.append(
            DepthRecord(depth=depth, min_ratio=ratio, strongly_exposed=ratio > 0)
        )
    flag = False
    if len(records) >= 2:
        first, last = records[0].min_ratio, records[-1].min_ratio
        if first not in (0, math.inf) and last != math.inf:
            flag = last < decay_threshold * first
    return ExposureTrend(
        pair=(p, q),
        records=tuple(records),
        limit_property_z_flag=flag,
        threshold=decay_threshold,
    )


def sequence_diagnostics(
    family,
    p: str,
    q: str,
    depths: Sequence[int] = DEFAULT_DEPTHS,
    decay_threshold: float = DEFAULT_DECAY_THRESHOLD,
) -> SequenceDiagnostics:
    """Tabulate excess(probe_n; p, q) / d(probe_n, q) along the family's
    probe sequence for the ordered pair (p, q).

    Decay of this ratio toward zero is the hypothesis under which the
    norm-attainment set of (p,q) acquires a point lying over q, so the
    flag marks candidate pairs whose molecules stay extreme at every
    finite depth yet cannot be strongly exposed in the limit.
    """
    _require_family(family)
    if not depths:
        return SequenceDiagnostics(
            pair=(p, q),
            records=(),
            monotone_decreasing=False,
            decay_factor=None,
            flag=False,
            threshold=decay_threshold,
        )
    deepest = family.generate(max(depths))
    try:
        pi, qi = deepest.index(p), deepest.index(q)
    except Exception as exc:
        raise UnknownFamily(
            f"family does not carry points {p!r},{q!r} at depth {max(depths)}"
        ) from exc
    records = []
    for n in depths:
        probe = family.probe_label(p, q, n)
        if probe is None:
            continue
        ri = deepest.index(probe)
        exc_val = float(deepest.excess_raw(ri, pi, qi))
        denom = float(deepest.dist[ri][qi])
        records.append(SequenceRecord(n=n, excess=exc_val, ratio=exc_val / denom))
    ratios = [rec.ratio for rec in records]
    monotone = all(a > b for a, b in zip(ratios, ratios[1:])) and len(ratios) >= 2
    decay = ratios[-1] / ratios[0] if len(ratios) >= 2 and ratios[0] > 0 else None
    flag = decay is not None and decay < decay_threshold
    return SequenceDiagnostics(
        pair=(p, q),
        records=tuple(records),
        monotone_decreasing=monotone,
        decay_factor=decay,
        flag=flag,
        threshold=decay_threshold,
    )
