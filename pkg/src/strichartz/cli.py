"""Command-line entry point: ``strichartz <command> ...`` or ``python -m strichartz``.

Every command writes plain CSV or JSON (to ``--out`` or stdout).  Exit
codes: 0 on success, 2 when a numerical check fails, 3 on bad usage.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import flows, hessian, inequality, qmho
from .lambda_table import TABLE_CAP, TableCapError, cached_table
from .linalg import EigenError

EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_USAGE = 3
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump_json(doc: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **doc}, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _positive(kind):
    def conv(s):
        v = kind(s)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"expected a positive value, got {s}")
        return v
    return conv


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s}")
    return v


# --------------------------------------------------------------------------
# commands

def cmd_lambda(args):
    if args.order > TABLE_CAP:
        raise UsageError(f"--order {args.order} exceeds cap {TABLE_CAP}")
    table = cached_table(args.order, args.cache_dir)
    _emit(table.to_json() + "\n", args.out)


def cmd_flow(args):
    if args.order > TABLE_CAP:
        raise UsageError(f"--order {args.order} exceeds cap {TABLE_CAP}")
    table = cached_table(args.order, args.cache_dir)
    try:
        alpha0 = flows.parse_initial(args.init, table.size)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not np.any(alpha0):
        raise UsageError("initial coefficients are all zero")
    if args.kind == "gradient":
        report = flows.gradient_flow(alpha0, table, step=args.step, max_steps=args.steps,
                                     tol=args.tol, direction=args.direction)
        S = np.array(report.S)
        sign = 1.0 if args.direction == flows.ASCENT else -1.0
        if np.any(sign * np.diff(S) < -1e-13 * np.abs(S[1:])):
            raise CheckFailed("S is not monotone along the gradient flow")
    else:
        n_steps = int(round(args.t / args.dt))
        report = flows.hamiltonian_flow(alpha0, table, dt=args.dt, n_steps=n_steps,
                                        tol=args.tol, record_every=args.record_every)
    _emit(report.to_csv(), args.out)


def cmd_hessian(args):
    if args.target == "mode":
        K = args.tail
        if K <= 2 * args.m:
            raise UsageError(f"--tail must exceed 2m = {2 * args.m}")
        spec = hessian.spectrum_1d(args.m, K, args.tol)
        if args.format == "csv":
            _emit(spec.full.to_csv(), args.out)
            return
        neg, zero, pos = spec.block_counts()
        doc = {"target": "mode", "m": args.m, "tail_cutoff": K,
               "block_eigenvalues": [float(v) for v in spec.block],
               "block_counts": {"negative": neg, "zero": zero, "positive": pos},
               "tail_head": [float(v) for v in spec.tail[:10]],
               "tail_settled": hessian.tail_settled(spec.tail, tolerance=args.tol),
               **spec.full.to_dict()}
        _emit(_dump_json(doc), args.out)
        return
    size = (args.nmax + 1) ** args.dim - 1
    if size > args.cap:
        raise UsageError(f"matrix size {size} exceeds cap {args.cap}")
    g = hessian.spectrum_gaussian(args.dim, args.nmax, args.tol, args.convention, args.method)
    if args.format == "csv":
        _emit(g.spectrum.to_csv(), args.out)
    else:
        _emit(_dump_json({"target": "gaussian", **g.to_dict()}), args.out)
    if g.counts[2]:
        raise CheckFailed(f"{g.counts[2]} positive eigenvalues at the Gaussian")


def cmd_inequality(args):
    if args.kind == "column":
        rows = inequality.column_sum_sweep(args.dim, args.kmax, args.q)
        ok = all(r["ok"] for r in rows)
        _emit(_dump_json({"dim": args.dim, "kmax": args.kmax, "passed": ok, "columns": rows}),
              args.out)
        if not ok:
            raise CheckFailed("column-sum inequality fails")
        return
    rep = inequality.hessest_check(args.nmax, margins_upto=args.margins_upto,
                                   raise_on_violation=False)
    _emit(_dump_json(rep.to_dict()), args.out)
    if not rep.passed:
        raise CheckFailed(f"inequality fails at n = {rep.violations[:10]}")


def cmd_qmho(args):
    if args.kind == "hessian":
        n = args.n
        rows = ["k,entry"] + [f"{k},{qmho.qmho_hessian_diag(args.m, k):.17g}"
                              for k in range(n) if k != args.m]
        _emit("\n".join(rows) + "\n", args.out)
        return
    try:
        alpha0 = np.array(json.loads(args.init), dtype=float)
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise UsageError(f"--init must be a JSON array of reals: {exc}") from exc
    if alpha0.ndim != 1 or not np.any(alpha0):
        raise UsageError("--init must be a non-zero 1d array")
    traj = qmho.qmho_flow(alpha0, step=args.step, n_steps=args.steps)
    _emit(traj.to_csv(), args.out)


def cmd_oracle(args):
    table = cached_table(args.order, args.cache_dir)
    rng = np.random.default_rng(args.seed)
    cases = {f"mode:{m}": np.eye(table.size)[m] for m in range(table.size)}
    for i in range(args.samples):
        cases[f"random:{i}"] = rng.standard_normal(table.size) + 1j * rng.standard_normal(table.size)
    rows = []
    worst = 0.0
    for name, a in cases.items():
        lam = flows.strichartz_numerator(a, table)
        direct = flows.direct_quadrature_oracle(a)
        rel = abs(lam - direct) / abs(direct)
        worst = max(worst, rel)
        rows.append({"case": name, "lambda_sum": lam, "direct": direct, "rel_err": rel})
    passed = bool(worst < args.tol)
    _emit(_dump_json({"order": args.order, "tol": args.tol, "max_rel_err": worst,
                      "passed": passed, "cases": rows}), args.out)
    if not passed:
        raise CheckFailed(f"oracle mismatch {worst:.3e} > {args.tol}")


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="strichartz", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=_positive(int), default=None,
                   help="cap BLAS/OpenMP worker threads")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, table=False):
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        if table:
            sp.add_argument("--cache-dir", default=None,
                            help="table cache (default $STRICHARTZ_CACHE_DIR)")

    sp = sub.add_parser("lambda", help="build and serialize the resonant coefficient table")
    sp.add_argument("--order", type=_nonneg_int, required=True)
    common(sp, table=True)
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("flow", help="gradient or Hamiltonian flow")
    sp.add_argument("kind", choices=["gradient", "hamiltonian"])
    sp.add_argument("--init", default="gaussian",
                    help="gaussian | mode:m | gaussian+noise:eps:seed | JSON [[re, im], ...]")
    sp.add_argument("--order", type=_nonneg_int, default=8)
    sp.add_argument("--steps", type=_positive(int), default=2000)
    sp.add_argument("--step", type=_positive(float), default=0.5)
    sp.add_argument("--tol", type=_positive(float), default=None)
    sp.add_argument("--direction", choices=[flows.ASCENT, flows.DESCENT], default=flows.ASCENT)
    sp.add_argument("--dt", type=_positive(float), default=1e-4)
    sp.add_argument("--t", type=_positive(float), default=1.0)
    sp.add_argument("--record-every", type=_positive(int), default=100)
    common(sp, table=True)
    sp.set_defaults(func=cmd_flow)

    sp = sub.add_parser("hessian", help="constrained Hessian spectra")
    sp.add_argument("target", choices=["mode", "gaussian"])
    sp.add_argument("--m", type=_nonneg_int, default=0)
    sp.add_argument("--tail", type=_positive(int), default=hessian.DEFAULT_TAIL)
    sp.add_argument("--dim", type=_positive(int), default=1)
    sp.add_argument("--nmax", type=_positive(int), default=8)
    sp.add_argument("--tol", type=_positive(float), default=1e-8)
    sp.add_argument("--convention", choices=sorted(hessian.CONVENTIONS), default="section8")
    sp.add_argument("--method", choices=["householder-ql", "jacobi", "lapack"],
                    default="householder-ql")
    sp.add_argument("--cap", type=_positive(int), default=4000)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    common(sp)
    sp.set_defaults(func=cmd_hessian)

    sp = sub.add_parser("inequality", help="exact 1d bound, or column sums with 'column'")
    sp.add_argument("kind", nargs="?", choices=["column"], default=None)
    sp.add_argument("--nmax", type=_positive(int), default=10000)
    sp.add_argument("--margins-upto", type=_nonneg_int, default=200)
    sp.add_argument("--dim", type=_positive(int), default=3)
    sp.add_argument("--kmax", type=_positive(int), default=10)
    sp.add_argument("--q", type=_positive(float), default=None)
    common(sp)
    sp.set_defaults(func=cmd_inequality)

    sp = sub.add_parser("qmho", help="harmonic-oscillator reference model")
    sp.add_argument("kind", choices=["flow", "hessian"])
    sp.add_argument("--init", default="[1, 0.1, 0.1]")
    sp.add_argument("--step", type=_positive(float), default=qmho.DEFAULT_STEP)
    sp.add_argument("--steps", type=_positive(int), default=2000)
    sp.add_argument("--m", type=_nonneg_int, default=0)
    sp.add_argument("--n", type=_positive(int), default=10)
    common(sp)
    sp.set_defaults(func=cmd_qmho)

    sp = sub.add_parser("oracle", help="resonant sum against direct space-time quadrature")
    sp.add_argument("kind", choices=["check"])
    sp.add_argument("--order", type=_nonneg_int, default=4)
    sp.add_argument("--samples", type=_nonneg_int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=_positive(float), default=1e-6)
    common(sp, table=True)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "flow" and args.tol is None:
        args.tol = 1e-8
    try:
        if args.threads:
            from threadpoolctl import threadpool_limits
            with threadpool_limits(limits=args.threads):
                args.func(args)
        else:
            args.func(args)
    except (UsageError, TableCapError) as exc:
        print(f"strichartz: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CheckFailed, flows.FlowError, inequality.InequalityViolation,
            qmho.QmhoStepError, hessian.TailNotSettled, EigenError) as exc:
        print(f"strichartz: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ValueError as exc:
        print(f"strichartz: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
