"""Command-line front end.

Exit codes: 0 success, 2 unreadable or invalid input, 3 infeasible or
non-positive, 4 deformation method inapplicable or search found nothing.
Errors are reported as a single JSON line ``{"error": ..., "message": ...}``
on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .classical import (
    abc_channel,
    abc_prime_channel,
    mutual_information,
    overlap_table,
    total_variation_overlap,
)
from .deform import deform_theorem2, extract_multiplier, search_deformation, spin_flip_pair
from .ensemble import gram_matrix, gram_to_ensemble, pairwise_overlaps
from .entropy import ensemble_entropy, linearized_entropy, shannon_entropy, spectrum_entropy
from .errors import GramDeformError, InvalidInput, NotFound, NotPositive
from .numerics import eigvalsh
from .triples import TripleSpec, construct_triple, sweep_csv, xi_max, xi_sweep


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error("UsageError", message)
        sys.exit(2)


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _floats(text: str, count: int | None = None) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InvalidInput(f"cannot parse numbers from {text!r}") from exc
    if count is not None and len(vals) != count:
        raise InvalidInput(f"expected {count} comma-separated numbers, got {len(vals)}")
    return vals


def _print(obj) -> None:
    sys.stdout.write(io.dumps(obj))


def cmd_entropy(args) -> int:
    ens = io.load_ensemble(args.ensemble)
    w = eigvalsh(gram_matrix(ens))
    _print(
        {
            "entropy": spectrum_entropy(w, args.base),
            "base": args.base,
            "s_lin": linearized_entropy(ens),
            "shannon": shannon_entropy(ens.probs, args.base),
            "eigenvalues": [float(x) for x in w],
        }
    )
    return 0


def cmd_sweep(args) -> int:
    a = _floats(args.overlaps, 3)
    probs = _floats(args.probs, 3)
    points = xi_sweep(*a, probs=probs, steps=args.steps)
    if args.out:
        Path(args.out).write_text(sweep_csv(points))
    else:
        sys.stdout.write(sweep_csv(points))
        return 0
    _print(
        {
            "xi_max": xi_max(*a),
            "entropy_start": points[0].entropy,
            "entropy_end": points[-1].entropy,
            "points": len(points),
            "out": args.out,
        }
    )
    return 0


def cmd_deform(args) -> int:
    ens = io.load_ensemble(args.ensemble)
    kind = args.kind.upper()
    if args.method == "theorem2":
        report = deform_theorem2(ens, kind)
    else:
        report = search_deformation(ens, kind, budget=args.budget, seed=args.seed)
        if report is None:
            raise NotFound(f"no {kind} deformation found within {args.budget} evaluations")
    text = io.dumps(io.report_to_dict(report))
    if args.out:
        Path(args.out).write_text(text)
        _print(
            {
                "kind": report.kind,
                "method": report.method,
                "entropy_before": report.entropy_before,
                "entropy_after": report.entropy_after,
                "out": args.out,
            }
        )
    else:
        sys.stdout.write(text)
    return 0


def _describe(g: np.ndarray, w: np.ndarray) -> str:
    n = g.shape[0]
    rank = int(np.sum(w > 1e-10))
    if np.max(np.abs(g - np.diag(np.diag(g)))) <= 1e-12 and np.all(np.diag(g).real > 0):
        return f"positive, ensemble of {n} orthonormal states"
    return f"positive, ensemble of {n} states spanning {rank} dimensions"


def cmd_check(args) -> int:
    mats = io.grams_from_dict(io.load_json(args.gram))
    out = {"matrices": []}
    for g in mats:
        w = eigvalsh(g)
        entry = {"eigenvalues": [float(x) for x in w], "trace": float(np.trace(g).real)}
        if w[-1] < -1e-10:
            entry.update(positive=False, verdict="not positive")
        else:
            ens = gram_to_ensemble(g)
            entry.update(
                positive=True,
                verdict=_describe(g, w),
                entropy_nats=ensemble_entropy(ens),
            )
        out["matrices"].append(entry)
    if len(mats) == 2 and all(m["positive"] for m in out["matrices"]):
        mult = extract_multiplier(mats[0], mats[1])
        out["multiplier_min_eigenvalue"] = mult.min_eigenvalue
    _print(out if len(mats) > 1 else out["matrices"][0])
    bad = [k for k, m in enumerate(out["matrices"]) if not m["positive"]]
    if bad:
        raise NotPositive(f"matrix {bad[0]} has a negative eigenvalue")
    return 0


def cmd_construct(args) -> int:
    a = _floats(args.overlaps, 3)
    spec = TripleSpec(*a, args.xi, tuple(_floats(args.probs, 3)))
    text = io.dumps(io.ensemble_to_dict(construct_triple(spec)))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_classical(args) -> int:
    out = {}
    for name, ch in (("ABC", abc_channel()), ("A'B'C'", abc_prime_channel())):
        out[name] = {
            "mutual_information_bits": mutual_information(ch, "bits"),
            "bhattacharyya_overlaps": overlap_table(ch).tolist(),
            "total_variation_overlaps": overlap_table(ch, total_variation_overlap).tolist(),
        }
    _print(out)
    return 0


def cmd_spinflip(args) -> int:
    vecs = [_floats(v, 3) for v in args.vectors.split(";")]
    probs = _floats(args.probs, len(vecs))
    par, anti = spin_flip_pair(vecs, probs)
    out = {
        "overlaps_parallel": pairwise_overlaps(par).tolist(),
        "overlaps_antiparallel": pairwise_overlaps(anti).tolist(),
        "entropy_parallel_nats": ensemble_entropy(par),
        "entropy_antiparallel_nats": ensemble_entropy(anti),
    }
    if args.out:
        Path(args.out).write_text(
            io.dumps({"parallel": io.ensemble_to_dict(par), "antiparallel": io.ensemble_to_dict(anti)})
        )
    _print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gramdeform", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("entropy", help="entropy, linearised entropy and spectrum of an ensemble")
    s.add_argument("ensemble")
    s.add_argument("--base", choices=("nats", "bits"), default="nats")
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("sweep", help="entropy as a function of the triple phase at fixed overlaps")
    s.add_argument("--overlaps", required=True, help="a12,a23,a31")
    s.add_argument("--probs", default="0.3333333333333333,0.3333333333333333,0.3333333333333334")
    s.add_argument("--steps", type=int, default=100)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("deform", help="find a D1/D2 deformation of a three-state ensemble")
    s.add_argument("ensemble")
    s.add_argument("--kind", choices=("d1", "d2", "D1", "D2"), required=True)
    s.add_argument("--method", choices=("theorem2", "search"), default="theorem2")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=2000)
    s.add_argument("--out")
    s.set_defaults(func=cmd_deform)

    s = sub.add_parser("check", help="positivity and spectrum of one or two Gram matrices")
    s.add_argument("gram")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("construct", help="write the canonical three-state ensemble")
    s.add_argument("--overlaps", required=True, help="a12,a23,a31")
    s.add_argument("--xi", type=float, default=0.0)
    s.add_argument("--probs", default="0.3333333333333333,0.3333333333333333,0.3333333333333334")
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("classical", help="mutual information of the two classical channels")
    s.set_defaults(func=cmd_classical)

    s = sub.add_parser("spinflip", help="parallel vs anti-parallel two-qubit ensembles")
    s.add_argument("--vectors", required=True, help="x,y,z;x,y,z;...")
    s.add_argument("--probs", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_spinflip)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GramDeformError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
