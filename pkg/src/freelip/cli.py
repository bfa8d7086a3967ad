"""Command-line interface.

Subcommands: validate, classify, modulus, generate, attainment, diagnose.
Exit codes: 0 success, 1 parse/usage errors, 2 metric violations,
3 classifier/oracle disagreement (an internal inconsistency). JSON output
carries a report envelope whose payload region is byte-identical across
identical invocations; the timestamp lives outside it. FREELIP_THREADS
caps per-pair parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import classify as cls
from . import formats, generators, lipfun, polytope
from .space import (
    FLOAT,
    SpaceError,
    ValidationError,
    concavity_modulus,
    holder_transform,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_DISAGREEMENT = 3


class OracleUnavailable(SpaceError):
    pass


def _threads() -> int | None:
    raw = os.environ.get("FREELIP_THREADS")
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


def _num(v):
    if isinstance(v, Fraction):
        return formats.number_to_json(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _payload_bytes(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _emit(args, command: str, digest: str | None, payload, table: str) -> None:
    if args.json:
        envelope = {
            "tool": "freelip",
            "version": __version__,
            "command": command,
            "input_digest": digest,
            "payload": payload,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        print(json.dumps(envelope, sort_keys=True, indent=2))
    else:
        print(table)


def _load(args):
    return formats.load_space(
        args.path,
        fmt=args.format,
        mode=args.mode,
        base=args.base,
        rel_tol=args.tolerance,
    )


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("path", help="space file (JSON matrix, JSON point cloud, or CSV)")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--mode", choices=["exact", "float"], default=None)
    p.add_argument("--base", default=None, help="base point label")
    p.add_argument("--tolerance", type=float, default=1e-9)


def _validation_payload(err: ValidationError) -> dict:
    return {
        "valid": False,
        "violations": [
            {
                "kind": v.kind,
                "i": v.i,
                "j": v.j,
                "k": v.k,
                "deficit": _num(v.deficit),
            }
            for v in err.violations
        ],
    }


def cmd_validate(args) -> int:
    try:
        space = _load(args)
    except ValidationError as err:
        payload = _validation_payload(err)
        lines = ["INVALID"] + [
            "  " + v.describe() for v in err.violations
        ]
        _emit(args, "validate", None, payload, "\n".join(lines))
        return EXIT_INVALID
    payload = {
        "valid": True,
        "points": space.n,
        "mode": space.mode,
        "base": space.base_label,
    }
    _emit(
        args,
        "validate",
        formats.space_digest(space),
        payload,
        f"VALID  {space.n} points, mode={space.mode}, base={space.base_label}",
    )
    return EXIT_OK


def _verdict_payload(space, verdict: cls.PairVerdict) -> dict:
    return {
        "p": verdict.pair[0],
        "q": verdict.pair[1],
        "extreme": verdict.is_extreme,
        "witness": verdict.witness_middle,
        "min_ratio": _num(verdict.min_ratio),
        "modulus": [
            [_num(e.eps), _num(e.delta)] for e in verdict.modulus.entries
        ],
        "notes": list(verdict.notes),
    }


def cmd_classify(args) -> int:
    try:
        space = _load(args)
    except ValidationError as err:
        _emit(args, "classify", None, _validation_payload(err), "INVALID")
        return EXIT_INVALID
    digest = formats.space_digest(space)
    if args.oracle and space.mode == FLOAT:
        raise OracleUnavailable("the polytope oracle requires exact mode")
    if args.oracle and space.n > polytope.MAX_ORACLE_POINTS:
        raise OracleUnavailable(
            f"the polytope oracle is guarded at {polytope.MAX_ORACLE_POINTS} points"
        )

    if args.pair:
        verdicts = [cls.classify_pair(space, args.pair[0], args.pair[1])]
        triples = None
        concave = None
    else:
        report = cls.classify_all(space, max_workers=_threads())
        verdicts = list(report.pair_verdicts)
        triples = [list(t) for t in report.violating_triples]
        concave = report.is_concave

    oracle_rows = []
    if args.oracle:
        for v in verdicts:
            cert = polytope.is_vertex(space, v.pair[0], v.pair[1])
            agree = cert.vertex == v.is_extreme
            oracle_rows.append((v, cert, agree))
            if not agree:
                payload = {
                    "disagreement": {
                        "pair": list(v.pair),
                        "classifier_extreme": v.is_extreme,
                        "oracle_vertex": cert.vertex,
                        "classifier_witness": v.witness_middle,
                        "oracle_certificate": _cert_payload(cert),
                    }
                }
                _emit(
                    args,
                    "classify",
                    digest,
                    payload,
                    f"DISAGREEMENT on pair {v.pair}",
                )
                return EXIT_DISAGREEMENT

    payload: dict = {
        "space_digest": digest,
        "pairs": [_verdict_payload(space, v) for v in verdicts],
    }
    if concave is not None:
        payload["concave"] = concave
        payload["aligned_triples"] = triples
    if args.oracle:
        payload["oracle"] = [
            {
                "pair": list(v.pair),
                "vertex": cert.vertex,
                "agrees": agree,
                "certificate": _cert_payload(cert),
            }
            for v, cert, agree in oracle_rows
        ]

    lines = []
    if concave is not None:
        lines.append(f"concave: {concave}")
        if triples:
            lines.append("aligned triples (middle, end, end):")
            lines.extend(f"  {tuple(t)}" for t in triples)
    for v in verdicts:
        mark = "extreme" if v.is_extreme else f"NOT extreme (middle {v.witness_middle})"
        lines.append(
            f"  u[{v.pair[0]},{v.pair[1]}]  {mark}  min_ratio={_num(v.min_ratio)}"
        )
    if args.oracle:
        lines.append("oracle: all pairs agree")
    _emit(args, "classify", digest, payload, "\n".join(lines))
    return EXIT_OK


def _cert_payload(cert: polytope.VertexCertificate) -> dict:
    if cert.vertex:
        return {
            "type": "separating_functional",
            "functional": {k: _num(v) for k, v in cert.separating.items()},
            "margin": _num(cert.margin),
        }
    return {
        "type": "convex_weights",
        "weights": {f"{p},{q}": _num(w) for (p, q), w in cert.weights.items()},
    }


def cmd_modulus(args) -> int:
    try:
        space = _load(args)
    except ValidationError as err:
        _emit(args, "modulus", None, _validation_payload(err), "INVALID")
        return EXIT_INVALID
    eps_grid = [formats.parse_number(e) for e in args.eps]
    table = concavity_modulus(space, args.p, args.q, eps_grid)
    payload = {
        "p": table.p,
        "q": table.q,
        "entries": [
            {"eps": _num(e.eps), "delta": _num(e.delta), "witness": e.witness}
            for e in table.entries
        ],
    }
    lines = [f"modulus of ({table.p},{table.q})"] + [
        f"  eps={_num(e.eps)}  delta={_num(e.delta)}  witness={e.witness}"
        for e in table.entries
    ]
    _emit(args, "modulus", formats.space_digest(space), payload, "\n".join(lines))
    return EXIT_OK


def _family_from_args(args) -> generators.FamilySpec:
    if args.family == "c0":
        return generators.FamilySpec("c0_counterexample")
    if args.family == "spiral":
        fam = "planar_spiral_one_sided" if args.one_sided else "planar_spiral"
        return generators.FamilySpec(
            fam, {"lam": Fraction(args.lam), "seed": args.seed}
        )
    if args.family == "l2":
        return generators.FamilySpec("l2_nonholder")
    raise SpaceError(f"unknown family {args.family!r}")


def cmd_generate(args) -> int:
    if args.family == "holder":
        space = formats.load_space(args.input)
        out_space = holder_transform(space, Fraction(args.alpha))
        provenance = {
            "family": "holder",
            "alpha": str(Fraction(args.alpha)),
            "input_digest": formats.space_digest(space),
        }
    else:
        spec = _family_from_args(args)
        out_space = spec.generate(args.depth)
        provenance = dict(out_space.meta)
        provenance.pop("holder", None)
        provenance["depth"] = args.depth
    doc = formats.space_to_dict(out_space, provenance=provenance)
    text = json.dumps(doc, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {out_space.n} points to {args.out}")
    else:
        print(text)
    return EXIT_OK


def cmd_attainment(args) -> int:
    try:
        space = _load(args)
    except ValidationError as err:
        _emit(args, "attainment", None, _validation_payload(err), "INVALID")
        return EXIT_INVALID
    result = lipfun.attainment_set(space, args.p, args.q, intervals=args.intervals)
    payload = {
        "pair": list(result.pair),
        "members": [list(m) for m in result.members],
        "intervals": {
            f"{x},{y}": [_num(lo), _num(hi)]
            for (x, y), (lo, hi) in sorted(result.intervals.items())
        },
    }
    lines = [f"attainment set of ({result.pair[0]},{result.pair[1]}):"] + [
        f"  ({x},{y})" for x, y in result.members
    ]
    _emit(args, "attainment", formats.space_digest(space), payload, "\n".join(lines))
    return EXIT_OK


def cmd_diagnose(args) -> int:
    spec = _family_from_args(args)
    depths = args.depths
    p, q = args.pair
    diag = cls.sequence_diagnostics(spec, p, q, depths)
    trend = cls.strongly_exposed_verdict(spec, p, q, depths)
    payload = {
        "pair": [p, q],
        "sequence": {
            "records": [
                {"n": r.n, "excess": r.excess, "ratio": r.ratio}
                for r in diag.records
            ],
            "monotone_decreasing": diag.monotone_decreasing,
            "decay_factor": diag.decay_factor,
            "flag": diag.flag,
            "threshold": diag.threshold,
        },
        "exposure": {
            "records": [
                {
                    "depth": r.depth,
                    "min_ratio": _num(r.min_ratio),
                    "strongly_exposed": r.strongly_exposed,
                }
                for r in trend.records
            ],
            "limit_property_z_flag": trend.limit_property_z_flag,
            "threshold": trend.threshold,
        },
    }
    lines = [f"diagnostics for ({p},{q}) at depths {list(depths)}"]
    for r in diag.records:
        lines.append(f"  n={r.n}  excess={r.excess:.6g}  ratio={r.ratio:.6g}")
    lines.append(
        f"  ratio decay flag: {diag.flag} (factor {diag.decay_factor})"
    )
    for r in trend.records:
        lines.append(
            f"  depth={r.depth}  min_ratio={float(r.min_ratio):.6g}  "
            f"strongly_exposed={r.strongly_exposed}"
        )
    lines.append(f"  limit property-Z flag: {trend.limit_property_z_flag}")
    _emit(args, "diagnose", None, payload, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freelip",
        description="Extremal structure of the free-space unit ball over finite metric spaces.",
    )
    parser.add_argument("--version", action="version", version=f"freelip {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the metric axioms of a space file")
    _add_input_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("classify", help="extremality verdicts for molecules")
    _add_input_flags(p)
    p.add_argument("--pair", nargs=2, metavar=("P", "Q"))
    p.add_argument("--oracle", action="store_true", help="cross-check against the LP oracle")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("modulus", help="concavity modulus table of a pair")
    _add_input_flags(p)
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--eps", nargs="+", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_modulus)

    p = sub.add_parser("generate", help="emit a family truncation as a space file")
    p.add_argument("family", choices=["c0", "spiral", "l2", "holder"])
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--lambda", dest="lam", default="1/2", help="rational, e.g. 1/2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--one-sided", action="store_true")
    p.add_argument("--alpha", default="1/2", help="snowflake exponent (holder)")
    p.add_argument("--input", help="input space for holder")
    p.add_argument("--out", help="output path (stdout if omitted)")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("attainment", help="norm-attainment set of a pair")
    _add_input_flags(p)
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--intervals", choices=["lazy", "full"], default="lazy")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_attainment)

    p = sub.add_parser("diagnose", help="depth-trend diagnostics for a family pair")
    p.add_argument("family", choices=["c0", "spiral", "l2"])
    p.add_argument("--lambda", dest="lam", default="1/2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--one-sided", action="store_true")
    p.add_argument("--pair", nargs=2, metavar=("P", "Q"), required=True)
    p.add_argument("--depths", nargs="+", type=int, default=[4, 8, 16, 32])
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_diagnose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; keep 2 reserved for metric violations
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (formats.FormatError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpaceError, cls.UnknownFamily, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
