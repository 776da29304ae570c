"""Command-line entry points.

Verbs: sample, eval, compile, verify-identities, verify-diagrams, commutant,
separate.  Job-driven verbs read JSON from a file or stdin ("-"); every verb
writes a report JSON (schema "wilsonnet/1") to --out or stdout and exits 0
iff the verdict is pass.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import serialize, verify
from .groups import GroupKind, haar_sample, membership_check


def _read_job(path):
    import json

    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(report_dict, out):
    text = serialize.dumps(report_dict, indent=1)
    if out is None or out == "-":
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _kind_from_args(args):
    return GroupKind(args.family, args.n)


def cmd_sample(args):
    t0 = time.perf_counter()
    kind = _kind_from_args(args)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    records = []
    ok = True
    for i in range(args.count):
        g = haar_sample(kind, rng)
        rep = membership_check(g, tol=args.tol)
        ok = ok and rep.passed
        records.append(
            {
                "index": i,
                "element": serialize.element_to_json(g),
                "deviations": rep.deviations,
                "passed": rep.passed,
            }
        )
    report = {
        "schema": serialize.SCHEMA,
        "command": {
            "verb": "sample",
            "job": {
                "kind": serialize.kind_to_json(kind),
                "count": args.count,
                "seed": args.seed,
                "tol": args.tol,
            },
        },
        "seed": args.seed,
        "tol": args.tol,
        "records": records,
        "summary": {"count": args.count},
        "verdict": "pass" if ok else "fail",
        "wall_time_s": time.perf_counter() - t0,
    }
    _emit(report, args.out)
    return 0 if ok else 1


def _case_pieces(job, args):
    kind = serialize.kind_from_json(job["kind"])
    signature = serialize.signature_from_json(job["signature"])
    diagram = serialize.diagram_from_json(job["diagram"])
    if "configuration" in job:
        config = serialize.configuration_from_json(job["configuration"])
    else:
        seed = job.get("seed", args.seed)
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        config = verify._sample_configuration(kind, signature.r, rng)
    return kind, signature, diagram, config


def cmd_eval(args):
    t0 = time.perf_counter()
    job = _read_job(args.job)
    kind, signature, diagram, config = _case_pieces(job, args)
    _, product, oracle, compiled = verify.evaluate_case(kind, signature, diagram, config)
    deviation = abs(compiled - oracle)
    ok = deviation <= args.tol * (1.0 + abs(oracle))
    report = {
        "schema": serialize.SCHEMA,
        "command": {"verb": "eval", "job": job},
        "seed": job.get("seed", args.seed),
        "tol": args.tol,
        "records": [
            {
                "oracle": serialize.complex_to_json(oracle),
                "compiled_product": serialize.wilson_product_to_json(product),
                "compiled": serialize.complex_to_json(compiled),
                "deviation": deviation,
            }
        ],
        "summary": {"deviation": deviation},
        "verdict": "pass" if ok else "fail",
        "wall_time_s": time.perf_counter() - t0,
    }
    _emit(report, args.out)
    return 0 if ok else 1


def cmd_compile(args):
    t0 = time.perf_counter()
    job = _read_job(args.job)
    kind = serialize.kind_from_json(job["kind"])
    signature = serialize.signature_from_json(job["signature"])
    diagram = serialize.diagram_from_json(job["diagram"])
    from .spinnet import compile_orthosymplectic, compile_unitary

    if kind.has_form:
        product = compile_orthosymplectic(diagram, signature, kind)
    else:
        product = compile_unitary(diagram, signature)
    report = {
        "schema": serialize.SCHEMA,
        "command": {"verb": "compile", "job": job},
        "seed": job.get("seed", args.seed),
        "tol": args.tol,
        "records": [{"compiled_product": serialize.wilson_product_to_json(product)}],
        "summary": {"loops": len(product.loops), "sign": product.sign},
        "verdict": "pass",
        "wall_time_s": time.perf_counter() - t0,
    }
    _emit(report, args.out)
    return 0


def cmd_verify_identities(args):
    if args.job:
        job = _read_job(args.job)
    else:
        job = {
            "kind": serialize.kind_to_json(_kind_from_args(args)),
            "trials": args.trials,
            "seed": args.seed,
            "tol": args.tol,
            "max_edges": args.max_edges,
            "max_degree": args.max_degree,
            "check_invariance": args.check_invariance,
        }
    report = verify.run_identity_suite(job)
    _emit(report.to_dict(), args.out)
    return 0 if report.passed else 1


def cmd_verify_diagrams(args):
    job = {
        "max_p": args.max_p,
        "o_ranks": args.o_ranks,
        "sp_ranks": args.sp_ranks,
        "seed": args.seed,
    }
    report = verify.run_diagram_suite(job)
    _emit(report.to_dict(), args.out)
    return 0 if report.passed else 1


def cmd_commutant(args):
    kind = _kind_from_args(args)
    report = verify.commutant_report(kind, args.d, args.samples, args.seed)
    _emit(report.to_dict(), args.out)
    return 0 if report.passed else 1


def cmd_separate(args):
    kind = _kind_from_args(args)
    report = verify.separation_experiment(
        kind, args.r, args.max_len, args.trials, args.tol, args.seed
    )
    _emit(report.to_dict(), args.out)
    return 0 if report.passed else 1


def _add_kind_args(parser):
    parser.add_argument("--family", choices=["U", "SU", "O", "SO", "Sp"], required=True)
    parser.add_argument("--n", type=int, required=True, help="group rank")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wilsonnet",
        description="Evaluate spin networks and compile diagram operators to Wilson loops.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--out", default=None, help="report path, stdout if omitted")

    p = sub.add_parser("sample", help="draw Haar elements and report membership")
    _add_kind_args(p)
    p.add_argument("--count", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_sample, tol=1e-10)

    p = sub.add_parser("eval", help="oracle and compiled value of a spin-network job")
    p.add_argument("--job", required=True, help="job JSON path, or - for stdin")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compile", help="compile a diagram into a Wilson-loop product")
    p.add_argument("--job", required=True, help="job JSON path, or - for stdin")
    common(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("verify-identities", help="sweep compiled-vs-oracle identities")
    _add_kind_args(p)
    p.add_argument("--job", default=None, help="explicit job JSON, overrides other flags")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--max-edges", type=int, default=3)
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--check-invariance", action="store_true")
    common(p)
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("verify-diagrams", help="exact flip-normalization identities")
    p.add_argument("--max-p", type=int, default=4)
    p.add_argument("--o-ranks", type=int, nargs="*", default=[2, 3])
    p.add_argument("--sp-ranks", type=int, nargs="*", default=[1, 2])
    common(p)
    p.set_defaults(func=cmd_verify_diagrams)

    p = sub.add_parser("commutant", help="diagram span vs sampled commutant dimension")
    _add_kind_args(p)
    p.add_argument("--d", type=int, required=True, help="tensor power")
    p.add_argument("--samples", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_commutant)

    p = sub.add_parser("separate", help="word separation of diagonal conjugacy classes")
    _add_kind_args(p)
    p.add_argument("-r", type=int, default=2, help="tuple length / bouquet edges")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--trials", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_separate)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
