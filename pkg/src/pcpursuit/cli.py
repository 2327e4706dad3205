"""Command-line front end.

Subcommands: decompose, complete, mc, synth, certify, phase, bench.
Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
3 solver non-convergence (decompose and complete only).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .certify import certify_instance
from .core import NumericalError
from .harness import (
    BENCH_PRESETS,
    PhaseGridSpec,
    phase_trials,
    run_bench_table,
    write_bench_csv,
    write_phase_csv,
)
from .matio import ParseError, read_mask, read_matrix, write_mask, write_matrix
from .rng import RngState
from .solver import SolverConfig, solve_nuclear_completion, solve_pcp, solve_pcp_completion
from .synth import ProblemSpec, gen_problem

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_NOT_CONVERGED = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; this interface uses 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _lambda_arg(text: str):
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("lambda must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pcpursuit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="separate a matrix into low-rank + sparse")
    d.add_argument("--input", required=True)
    d.add_argument("--lambda", dest="lam", type=_lambda_arg, default=None, metavar="auto|X")
    d.add_argument("--tol", type=float, default=1e-7)
    d.add_argument("--max-iters", type=int, default=1000)
    d.add_argument("--out-l", required=True)
    d.add_argument("--out-s", required=True)
    d.add_argument("--report", required=True)

    c = sub.add_parser("complete", help="robust completion from observed entries")
    c.add_argument("--input", required=True)
    c.add_argument("--mask", required=True, help="observed-entry mask file")
    c.add_argument("--lambda", dest="lam", type=_lambda_arg, default=None, metavar="auto|X")
    c.add_argument("--tol", type=float, default=1e-7)
    c.add_argument("--max-iters", type=int, default=1000)
    c.add_argument("--out-l", required=True)
    c.add_argument("--out-s", required=True)
    c.add_argument("--report", required=True)

    m = sub.add_parser("mc", help="nuclear-norm completion (no corruption allowance)")
    m.add_argument("--input", required=True)
    m.add_argument("--mask", required=True)
    m.add_argument("--out-l", required=True)
    m.add_argument("--report", required=True)

    s = sub.add_parser("synth", help="generate a random instance with ground truth")
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--n2", type=int, required=True)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--rho", type=float, required=True)
    s.add_argument("--sign-model", choices=("random", "coherent"), default="random")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out-dir", required=True)

    ce = sub.add_parser("certify", help="dual-certificate margins on a random instance")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--rank", type=int, required=True)
    ce.add_argument("--rho", type=float, required=True)
    ce.add_argument("--seed", type=int, required=True)
    ce.add_argument("--report", required=True)

    ph = sub.add_parser("phase", help="phase-transition success grid")
    ph.add_argument("--n", type=int, required=True)
    ph.add_argument("--r-list", required=True, help="comma-separated ranks")
    ph.add_argument("--rho-list", required=True, help="comma-separated densities")
    ph.add_argument("--trials", type=int, default=10)
    ph.add_argument("--mode", choices=("pcp-random", "pcp-coherent", "mc"), required=True)
    ph.add_argument("--seed", type=int, default=0)
    ph.add_argument("--out", required=True)

    b = sub.add_parser("bench", help="exact-recovery benchmark table")
    b.add_argument("--preset", choices=sorted(BENCH_PRESETS), required=True)
    b.add_argument("--out", required=True)
    return p


def solution_report(sol, n1: int, n2: int) -> dict:
    return {
        "n1": n1,
        "n2": n2,
        "lambda": sol.lam,
        "beta": sol.beta,
        "iterations": sol.iterations,
        "svd_count": sol.svd_count,
        "final_residual": sol.final_residual,
        "rank_l": sol.rank_l,
        "card_s": sol.card_s,
        "converged": sol.converged,
        "wall_time_ms": sol.wall_time * 1000.0,
    }


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _cmd_decompose(args) -> int:
    m = read_matrix(args.input)
    cfg = SolverConfig(lam=args.lam, tol=args.tol, max_iters=args.max_iters)
    sol = solve_pcp(m, cfg)
    write_matrix(args.out_l, sol.l_hat)
    write_matrix(args.out_s, sol.s_hat)
    _write_json(args.report, solution_report(sol, *m.shape))
    return EXIT_OK if sol.converged else EXIT_NOT_CONVERGED


def _cmd_complete(args) -> int:
    m = read_matrix(args.input)
    obs = read_mask(args.mask)
    cfg = SolverConfig(lam=args.lam, tol=args.tol, max_iters=args.max_iters)
    sol = solve_pcp_completion(m, obs, cfg)
    write_matrix(args.out_l, sol.l_hat)
    write_matrix(args.out_s, sol.s_hat)
    _write_json(args.report, solution_report(sol, *m.shape))
    return EXIT_OK if sol.converged else EXIT_NOT_CONVERGED


def _cmd_mc(args) -> int:
    m = read_matrix(args.input)
    obs = read_mask(args.mask)
    sol = solve_nuclear_completion(m, obs)
    write_matrix(args.out_l, sol.l_hat)
    _write_json(args.report, solution_report(sol, *m.shape))
    return EXIT_OK


def _cmd_synth(args) -> int:
    spec = ProblemSpec(args.n1, args.n2, args.rank, args.rho, args.sign_model,
                       RngState(args.seed))
    inst = gen_problem(spec)
    os.makedirs(args.out_dir, exist_ok=True)
    write_matrix(os.path.join(args.out_dir, "m.pcpmat"), inst.m)
    write_matrix(os.path.join(args.out_dir, "l0.pcpmat"), inst.l0)
    write_matrix(os.path.join(args.out_dir, "s0.pcpmat"), inst.s0)
    write_mask(os.path.join(args.out_dir, "omega.pcpmask"), inst.omega)
    _write_json(os.path.join(args.out_dir, "instance.json"), {
        "n1": spec.n1,
        "n2": spec.n2,
        "rank": spec.r,
        "rho": spec.rho,
        "sign_model": spec.sign_model,
        "seed": spec.seed.seed,
        "stream": spec.seed.stream,
        "files": ["m.pcpmat", "l0.pcpmat", "s0.pcpmat", "omega.pcpmask"],
    })
    return EXIT_OK


def _cmd_certify(args) -> int:
    report = certify_instance(args.n, args.rank, args.rho, args.seed)
    _write_json(args.report, report.to_dict())
    return EXIT_OK


def _cmd_phase(args) -> int:
    try:
        r_values = [int(x) for x in args.r_list.split(",") if x]
        rho_values = [float(x) for x in args.rho_list.split(",") if x]
    except ValueError as exc:
        print(f"pcpursuit phase: bad list argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    spec = PhaseGridSpec(
        n=args.n,
        r_values=r_values,
        rho_values=rho_values,
        trials=args.trials,
        mode=args.mode.replace("-", "_"),
        base_seed=args.seed,
    )
    write_phase_csv(args.out, phase_trials(spec))
    return EXIT_OK


def _cmd_bench(args) -> int:
    write_bench_csv(args.out, run_bench_table(args.preset))
    return EXIT_OK


_COMMANDS = {
    "decompose": _cmd_decompose,
    "complete": _cmd_complete,
    "mc": _cmd_mc,
    "synth": _cmd_synth,
    "certify": _cmd_certify,
    "phase": _cmd_phase,
    "bench": _cmd_bench,
}


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"pcpursuit {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ParseError, OSError, ValueError) as exc:
        print(f"pcpursuit {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
