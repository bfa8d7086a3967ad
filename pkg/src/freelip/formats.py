"""Loading, serializing, and digesting spaces.

Three input formats are supported:

* JSON matrix object: {"labels": [...], "base": ..., "matrix": [[...]],
  "mode": "exact"|"float", "tolerance": ...}; exact entries may be
  integers or "num/den" strings.
* JSON point cloud: {"points": {label: [coords...]}, "norm":
  "l2"|"linf"|"l1", "base": ...}. Rational coordinates under "linf"/"l1"
  give exact rational distances (exact mode); "l2" gives float distances
  with the exact coordinates retained for alignment tests.
* CSV square matrix with a header row of labels; the base point defaults
  to the first label.

Exact numbers serialize canonically as "num/den" strings. The content
digest hashes the canonicalized matrix (labels sorted, entries in
rational normal form), so it is stable across label orderings.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from fractions import Fraction
from typing import Mapping

from .space import EXACT, FLOAT, DEFAULT_REL_TOL, FiniteMetricSpace, validate


class FormatError(Exception):
    """Unreadable or structurally invalid input (not a metric violation)."""


def parse_number(v):
    """Accept ints, floats, and 'num/den' or decimal strings."""
    if isinstance(v, bool):
        raise FormatError(f"not a number: {v!r}")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        s = v.strip()
        try:
            if "/" in s:
                return Fraction(s)
            if any(c in s for c in ".eE"):
                return float(s)
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"not a number: {v!r}") from exc
    raise FormatError(f"not a number: {v!r}")


def number_to_json(v):
    """Canonical JSON form: exact -> 'num/den' string, float -> number."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return v
    if isinstance(v, int):
        return f"{v}/1"
    return v


def _entry_is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) or (
        isinstance(v, str) and not any(c in v for c in ".eE")
    )


def space_from_dict(
    obj: Mapping,
    mode: str | None = None,
    base=None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> FiniteMetricSpace:
    """Build a space from a parsed JSON object (matrix or point cloud).

    When both "points" and "matrix" are present (as in generated files)
    the point cloud wins: distances are rebuilt from the coordinates and
    the exact-alignment machinery stays available.
    """
    if "points" in obj:
        return _space_from_cloud(obj, base=base, rel_tol=rel_tol)
    if "matrix" in obj:
        labels = [str(x) for x in obj["labels"]]
        raw = obj["matrix"]
        eff_mode = mode or obj.get("mode")
        if eff_mode is None:
            eff_mode = (
                EXACT
                if all(_entry_is_exact(v) for row in raw for v in row)
                else FLOAT
            )
        if eff_mode not in (EXACT, FLOAT):
            raise FormatError(f"unknown mode {eff_mode!r}")
        matrix = [[parse_number(v) for v in row] for row in raw]
        eff_base = base if base is not None else obj.get("base", 0)
        tol = float(obj.get("tolerance", rel_tol))
        return validate(matrix, labels, base=eff_base, mode=eff_mode, rel_tol=tol)
    raise FormatError("JSON object has neither 'matrix' nor 'points'")


def _space_from_cloud(obj: Mapping, base=None, rel_tol: float = DEFAULT_REL_TOL):
    norm = obj.get("norm", "l2")
    if norm not in ("l2", "linf", "l1"):
        raise FormatError(f"unknown norm {norm!r}")
    raw_points = obj["points"]
    labels = [str(k) for k in raw_points]
    coords: dict[str, tuple[Fraction, ...]] = {}
    dims = set()
    for lab in labels:
        vec = tuple(Fraction(parse_number(c)) for c in raw_points[lab])
        coords[lab] = vec
        dims.add(len(vec))
    if len(dims) != 1:
        raise FormatError("all points need the same dimension")
    eff_base = base if base is not None else obj.get("base", labels[0])

    def dist(a: str, b: str):
        diff = [x - y for x, y in zip(coords[a], coords[b])]
        if norm == "l1":
            return sum(abs(v) for v in diff)
        if norm == "linf":
            return max((abs(v) for v in diff), default=Fraction(0))
        return math.sqrt(float(sum(v * v for v in diff)))

    matrix = [[dist(a, b) for b in labels] for a in labels]
    if norm == "l2":
        return validate(
            matrix,
            labels,
            base=eff_base,
            mode=FLOAT,
            rel_tol=rel_tol,
            coords=coords,
            coord_norm="l2",
        )
    return validate(
        matrix,
        labels,
        base=eff_base,
        mode=EXACT,
        coords=coords,
        coord_norm=norm,
    )


def space_from_csv(
    text: str,
    mode: str | None = None,
    base=None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> FiniteMetricSpace:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows:
        raise FormatError("empty CSV")
    labels = [c.strip() for c in rows[0]]
    body = [[c.strip() for c in row] for row in rows[1:]]
    if len(body) != len(labels) or any(len(r) != len(labels) for r in body):
        raise FormatError("CSV body must be square with one row per label")
    eff_mode = mode
    if eff_mode is None:
        eff_mode = (
            EXACT if all(_entry_is_exact(v) for row in body for v in row) else FLOAT
        )
    matrix = [[parse_number(v) for v in row] for row in body]
    eff_base = base if base is not None else labels[0]
    return validate(matrix, labels, base=eff_base, mode=eff_mode, rel_tol=rel_tol)


def load_space(
    path: str,
    fmt: str | None = None,
    mode: str | None = None,
    base=None,
    rel_tol: float = DEFAULT_REL_TOL,
) -> FiniteMetricSpace:
    """Load a space from a file; format inferred from the extension."""
    if fmt is None:
        fmt = "csv" if path.lower().endswith(".csv") else "json"
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "csv":
        return space_from_csv(text, mode=mode, base=base, rel_tol=rel_tol)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise FormatError("top-level JSON value must be an object")
    return space_from_dict(obj, mode=mode, base=base, rel_tol=rel_tol)


def space_to_dict(space: FiniteMetricSpace, provenance: Mapping | None = None) -> dict:
    """Standard space JSON; includes coordinates when the space has them."""
    out: dict = {
        "labels": list(space.labels),
        "base": space.base_label,
        "matrix": [[number_to_json(v) for v in row] for row in space.dist],
        "mode": space.mode,
    }
    if space.mode == FLOAT:
        out["tolerance"] = space.rel_tol
    if space.coords is not None:
        out["points"] = {
            lab: [number_to_json(c) for c in vec]
            for lab, vec in zip(space.labels, space.coords)
        }
        out["norm"] = space.coord_norm
    if provenance:
        out["provenance"] = dict(provenance)
    return out


def space_digest(space: FiniteMetricSpace) -> str:
    """SHA-256 of the canonicalized matrix; label-order independent."""
    order = sorted(range(space.n), key=lambda i: space.labels[i])
    canon = {
        "labels": [space.labels[i] for i in order],
        "matrix": [
            [_canon_entry(space.dist[i][j]) for j in order] for i in order
        ],
        "mode": space.mode,
    }
    blob = json.dumps(canon, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _canon_entry(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))
