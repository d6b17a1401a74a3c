"""Command-line front end.

Subcommands: ``mean``, ``lambda``, ``power``, ``residual``, ``metric``,
``divergence``, ``minimize``, ``verify``.  All matrix and measure I/O uses
the JSON schemas of :mod:`spdmeans.core` / :mod:`spdmeans.measures`;
numeric output is serialized with shortest round-trip floats so identical
inputs produce byte-identical output.

Exit codes: 0 success, 1 input error (malformed JSON, missing file, bad
flag), 2 solver non-convergence.
"""

import argparse
import json
import sys

import numpy as np

from . import divergence as dvg
from . import measures, solver, thompson, verify
from .core import matrix_from_json, matrix_to_json
from .errors import NonConvergence, SpdMeansError


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpdMeansError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpdMeansError(f"malformed JSON in {path}: {exc}") from exc


def _load_measure(path, nodes):
    try:
        return measures.pmeasure_from_json(_load_json(path), default_nodes=nodes)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpdMeansError(f"bad measure JSON in {path}: {exc}") from exc


def _load_matrix(path, spd=True):
    try:
        return matrix_from_json(_load_json(path), spd=spd)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpdMeansError(f"bad matrix JSON in {path}: {exc}") from exc


def _load_sigma(path):
    """Matrix-marginal JSON: {"atoms": [{"weight": w, "matrix": {...}}, ...]}."""
    obj = _load_json(path)
    try:
        return [(a["weight"], matrix_from_json(a["matrix"])) for a in obj["atoms"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpdMeansError(f"bad matrix-list JSON in {path}: {exc}") from exc


def _emit(obj, path):
    text = json.dumps(obj) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _solver_config(args):
    return solver.SolverConfig(
        fp_tol=args.fp_tol,
        max_iters=args.max_iters,
        lambda_tol=args.lambda_tol,
    )


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fp-tol", type=float, default=1e-12)
    common.add_argument("--max-iters", type=int, default=10000)
    common.add_argument("--lambda-tol", type=float, default=1e-9)
    common.add_argument("--nodes", type=int, default=64,
                        help="default quadrature nodes for measures that omit them")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", default="-", metavar="PATH|-")

    p = argparse.ArgumentParser(prog="spdmeans", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("mean", parents=[common], help="induced mean at parameter t")
    sp.add_argument("measure")
    sp.add_argument("--t", type=float, required=True)

    sp = sub.add_parser("lambda", parents=[common], help="Karcher mean (t -> 0 net limit)")
    sp.add_argument("measure")

    sp = sub.add_parser("power", parents=[common], help="matrix power mean of a matrix list")
    sp.add_argument("sigma")
    sp.add_argument("--t", type=float, required=True)

    sp = sub.add_parser("residual", parents=[common], help="Karcher residual at a point")
    sp.add_argument("measure")
    sp.add_argument("x")

    sp = sub.add_parser("metric", parents=[common], help="Thompson distance of two matrices")
    sp.add_argument("a")
    sp.add_argument("b")

    sp = sub.add_parser("divergence", parents=[common], help="integrated divergence at a point")
    sp.add_argument("measure")
    sp.add_argument("x")

    sp = sub.add_parser("minimize", parents=[common], help="gradient-descent minimizer")
    sp.add_argument("measure")
    sp.add_argument("--grad-tol", type=float, default=1e-9)

    sp = sub.add_parser("verify", parents=[common], help="seeded invariant suites")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--dim", type=int, default=4)
    return p


def _run(args):
    if args.command == "mean":
        mu = _load_measure(args.measure, args.nodes)
        report = solver.induced_mean(args.t, mu, _solver_config(args))
        _emit(report.to_json(), args.output)
    elif args.command == "lambda":
        mu = _load_measure(args.measure, args.nodes)
        report = solver.lambda_mean(mu, _solver_config(args))
        _emit(report.to_json(), args.output)
    elif args.command == "power":
        sigma = _load_sigma(args.sigma)
        report = solver.power_mean(args.t, sigma, _solver_config(args))
        _emit(report.to_json(), args.output)
    elif args.command == "residual":
        mu = _load_measure(args.measure, args.nodes)
        x = _load_matrix(args.x)
        r = solver.karcher_residual(x, mu)
        _emit(
            {"residual_norm": float(np.linalg.norm(r)), "residual": matrix_to_json(r)},
            args.output,
        )
    elif args.command == "metric":
        a = _load_matrix(args.a)
        b = _load_matrix(args.b)
        _emit({"d_inf": thompson.distance(a, b)}, args.output)
    elif args.command == "divergence":
        mu = _load_measure(args.measure, args.nodes)
        x = _load_matrix(args.x)
        _emit({"objective": dvg.objective(x, mu)}, args.output)
    elif args.command == "minimize":
        mu = _load_measure(args.measure, args.nodes)
        cfg = dvg.RgdConfig(grad_tol=args.grad_tol, max_iters=args.max_iters)
        report = dvg.minimize_divergence(mu, cfg)
        _emit(report.to_json(), args.output)
    elif args.command == "verify":
        lines = []
        ok = verify.run_suite(
            args.suite, args.seed, args.dim, args.trials,
            nodes=args.nodes, out=lines.append,
        )
        text = "\n".join(lines) + "\n"
        if args.output == "-":
            sys.stdout.write(text)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        return 0 if ok else 1
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return _run(args)
    except NonConvergence as exc:
        sys.stderr.write(
            f"error: {exc} (final_step={exc.final_step!r}, iterations={exc.iterations})\n"
        )
        return 2
    except SpdMeansError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
