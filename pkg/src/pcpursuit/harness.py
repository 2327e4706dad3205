"""Experiment engine: recovery benchmarks and phase-transition grids.

``run_bench_table`` reproduces the exact-recovery benchmark (rank 5% of n,
sparse corruption at 5% or 10% of the entries, unit signs on a uniformly
random support of exact cardinality).  ``run_phase_grid`` sweeps (rank,
density) cells counting how often the solver recovers the ground truth to a
fixed relative tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import gen_uniform_mask, svd_full
from .prox import proj_support
from .rng import RngState
from .solver import SolverConfig, solve_nuclear_completion, solve_pcp
from .synth import ProblemSpec, gen_completion_problem, gen_problem, _low_rank, _random_signs

PHASE_MODES = ("pcp_random", "pcp_coherent", "mc")

BENCH_PRESETS = {
    "table1a_small": ((100, 200, 500), 0.05),
    "table1b_small": ((100, 200, 500), 0.10),
    "table1a_full": ((500, 1000, 2000, 3000), 0.05),
    "table1b_full": ((500, 1000, 2000, 3000), 0.10),
}


@dataclass
class PhaseGridSpec:
    n: int
    r_values: list
    rho_values: list
    trials: int = 10
    mode: str = "pcp_random"
    success_tol: float = 1e-3
    base_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.success_tol <= 0:
            raise ValueError(f"success_tol must be positive, got {self.success_tol}")
        if self.mode not in PHASE_MODES:
            raise ValueError(f"mode must be one of {PHASE_MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class PhaseTrial:
    mode: str
    n: int
    r: int
    rho: float
    trial: int
    stream: int  # derived RNG substream, recorded for replay
    rel_error: float
    success: bool
    iters: int


@dataclass(frozen=True)
class CellResult:
    r: int
    rho: float
    successes: int
    trials: int
    mean_rel_error: float
    mean_iters: float


def _rel_error(l_hat: np.ndarray, l0: np.ndarray) -> float:
    denom = np.linalg.norm(l0)
    if denom == 0.0:
        return float(np.linalg.norm(l_hat))
    return float(np.linalg.norm(l_hat - l0) / denom)


def run_phase_trial(mode: str, n: int, r: int, rho: float, rng: RngState) -> tuple:
    """One seeded instance through the mode's solver; returns (rel_error, iters).

    In mc mode rho is the probability that an entry is omitted from the
    observations (no corruption); in the pcp modes it is the corruption
    density.
    """
    if mode == "mc":
        spec = ProblemSpec(n, n, r, 0.0, "random", rng)
        inst, obs = gen_completion_problem(spec, 1.0 - rho, 0.0, rng)
        sol = solve_nuclear_completion(proj_support(inst.m, obs), obs)
    else:
        sign_model = "random" if mode == "pcp_random" else "coherent"
        inst = gen_problem(ProblemSpec(n, n, r, rho, sign_model, rng))
        sol = solve_pcp(inst.m)
    return _rel_error(sol.l_hat, inst.l0), sol.iterations


def phase_trials(spec: PhaseGridSpec) -> list:
    """All per-trial records of the grid, cells in (r, rho) order."""
    root = RngState(spec.base_seed)
    records = []
    for r in spec.r_values:
        for rho in spec.rho_values:
            for trial in range(spec.trials):
                rng = root.derive(spec.mode, int(r), float(rho), trial)
                try:
                    rel, iters = run_phase_trial(spec.mode, spec.n, int(r), float(rho), rng)
                except Exception:
                    # per-trial failures (degenerate masks, numerical errors)
                    # count as non-successes; the sweep continues
                    rel, iters = float("inf"), 0
                records.append(
                    PhaseTrial(spec.mode, spec.n, int(r), float(rho), trial, rng.stream,
                               rel, rel <= spec.success_tol, iters)
                )
    return records


def aggregate_cells(records, trials: int) -> list:
    cells = {}
    for rec in records:
        cells.setdefault((rec.r, rec.rho), []).append(rec)
    out = []
    for (r, rho), recs in cells.items():
        finite = [x.rel_error for x in recs if np.isfinite(x.rel_error)]
        out.append(
            CellResult(
                r=r,
                rho=rho,
                successes=sum(x.success for x in recs),
                trials=trials,
                mean_rel_error=float(np.mean(finite)) if finite else float("inf"),
                mean_iters=float(np.mean([x.iters for x in recs])),
            )
        )
    return out


def run_phase_grid(spec: PhaseGridSpec) -> list:
    """Seeded success fractions for every (r, rho) cell."""
    return aggregate_cells(phase_trials(spec), spec.trials)


def write_phase_csv(path, records) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("mode,n,r,rho,trial,seed,rel_error,success,iters\n")
        for x in records:
            fh.write(
                f"{x.mode},{x.n},{x.r},{x.rho:.17g},{x.trial},{x.stream},"
                f"{x.rel_error:.17g},{int(x.success)},{x.iters}\n"
            )


@dataclass(frozen=True)
class BenchRow:
    preset: str
    n: int
    rank_l0: int
    card_s0: int
    rank_l_hat: int
    card_s_hat: int
    rel_error: float
    svd_count: int
    time_s: float


def run_bench_row(preset: str, n: int, sparse_frac: float, base_seed: int = 0) -> BenchRow:
    """One benchmark instance: rank 5% of n, exact-cardinality random support."""
    rng = RngState(base_seed).derive(preset, n)
    r = int(round(0.05 * n))
    k = int(round(sparse_frac * n * n))
    l0 = _low_rank(rng, n, n, r)
    omega = gen_uniform_mask(rng.derive("omega"), n, n, k)
    s0 = np.where(omega.to_bool(), _random_signs(rng.derive("signs"), n, n), 0.0)
    m = l0 + s0
    sol = solve_pcp(m, SolverConfig(lam=1.0 / np.sqrt(n)))
    rank_l0 = svd_full(l0).numerical_rank()
    return BenchRow(
        preset=preset,
        n=n,
        rank_l0=rank_l0,
        card_s0=len(omega),
        rank_l_hat=sol.rank_l,
        card_s_hat=sol.card_s,
        rel_error=_rel_error(sol.l_hat, l0),
        svd_count=sol.svd_count,
        time_s=sol.wall_time,
    )


def run_bench_table(preset: str, base_seed: int = 0) -> list:
    """All rows of a preset; solver failures are recorded in-row, not raised."""
    if preset not in BENCH_PRESETS:
        raise ValueError(f"unknown preset {preset!r}; choose from {sorted(BENCH_PRESETS)}")
    ns, frac = BENCH_PRESETS[preset]
    return [run_bench_row(preset, n, frac, base_seed) for n in ns]


def write_bench_csv(path, rows) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("preset,n,rank_l0,card_s0,rank_l_hat,card_s_hat,rel_error,svd_count,time_s\n")
        for x in rows:
            fh.write(
                f"{x.preset},{x.n},{x.rank_l0},{x.card_s0},{x.rank_l_hat},{x.card_s_hat},"
                f"{x.rel_error:.17g},{x.svd_count},{x.time_s:.3f}\n"
            )
