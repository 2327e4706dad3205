"""Augmented-Lagrangian / alternating-directions solvers.

``solve_pcp`` separates M into low-rank + sparse by minimizing
``||L||_* + lambda ||S||_1`` subject to ``L + S = M``.  The completion
variants fit only the observed entries: ``solve_pcp_completion`` keeps the
l1 penalty on observations (robust completion), ``solve_nuclear_completion``
forces exact agreement there (pure completion).

One iteration alternates an entrywise shrink of the sparse block, a singular
value threshold of the low-rank block, and a multiplier update on the
residual; the sparse block goes first, which is what makes the iteration
count essentially dimension-free on well-posed inputs.  The quadratic
penalty ``beta`` is held constant.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass

import numpy as np

from .core import SupportMask, as_matrix, check_finite, numerical_rank, svd_full, svd_truncated


@dataclass
class SolverConfig:
    """Knobs for the alternating-directions loop.

    ``lam`` and ``beta`` default (None) to 1/sqrt(max(n1, n2)) and
    n1*n2 / (4 ||M||_1); ``rank_guess`` defaults to min(10, min(n1, n2)).
    """

    lam: float | None = None
    beta: float | None = None
    tol: float = 1e-7
    max_iters: int = 1000
    rank_guess: int | None = None
    full_svd_threshold: float = 0.2

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.lam is not None and self.lam <= 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.beta is not None and self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")


@dataclass
class PcpSolution:
    """Recovered pair plus convergence statistics.

    svd_count = iterations + svd_retries: one factorization per sweep plus
    any saturated-truncation retries of the adaptive rank schedule.
    """

    l_hat: np.ndarray
    s_hat: np.ndarray
    iterations: int
    svd_count: int
    final_residual: float
    rank_l: int
    card_s: int
    converged: bool
    wall_time: float
    lam: float
    beta: float
    svd_retries: int = 0


def default_lambda(n1: int, n2: int) -> float:
    return 1.0 / np.sqrt(max(n1, n2))


def default_beta(m: np.ndarray) -> float:
    l1 = np.abs(m).sum()
    if l1 == 0:
        raise ValueError("beta default is undefined for an all-zero matrix")
    return m.shape[0] * m.shape[1] / (4.0 * l1)


class _ScheduledSvt:
    """Singular value thresholding with the adaptive truncated-rank schedule.

    Keeps a predicted rank ``sv``; a truncated factorization whose computed
    values all exceed the threshold proves nothing about the ones it did not
    compute, so it is retried at a larger rank (each retry counts one SVD).
    Predictions above ``full_fraction`` of min(n1, n2) switch to a full SVD.
    """

    def __init__(self, nmin: int, rank_guess: int, full_fraction: float):
        if not 1 <= rank_guess <= nmin:
            raise ValueError(f"rank_guess must be in [1, {nmin}], got {rank_guess}")
        self.nmin = nmin
        self.sv = rank_guess
        self.full_cutoff = full_fraction * nmin
        self.svd_count = 0
        self.retries = 0

    def _grow(self, svp: int) -> int:
        return min(svp + max(1, round(0.05 * self.nmin)), self.nmin)

    def apply(self, g: np.ndarray, tau: float):
        """Returns (thresholded matrix, kept singular values)."""
        first = True
        while True:
            if self.sv > self.full_cutoff or self.sv >= self.nmin:
                f = svd_full(g)
                exact = True
            else:
                f = svd_truncated(g, self.sv)
                exact = False
            self.svd_count += 1
            if not first:
                self.retries += 1
            first = False
            svp = int((f.sigma > tau).sum())
            if exact or svp < self.sv:
                break
            # saturated truncation: every computed value is above tau
            self.sv = self._grow(svp)
        kept = f.sigma[:svp] - tau
        if svp:
            out = (f.u[:, :svp] * kept) @ f.v[:, :svp].T
        else:
            out = np.zeros_like(g)
        self.sv = min(svp + 1, self.nmin) if svp < self.sv else self._grow(svp)
        return out, kept


def _alm(m0, obs, shrink_on_obs, cfg, step_hook=None):
    """Shared loop.  obs is a boolean array or None (fully observed).

    shrink_on_obs=False pins the sparse block to zero on observations
    (nuclear-norm completion); off-support entries are free slack assigned
    after the low-rank step so the multiplier stays supported on obs.
    """
    m0 = check_finite(as_matrix(m0), "input matrix")
    n1, n2 = m0.shape
    t0 = time.perf_counter()

    norm_m = np.linalg.norm(m0)
    linf_m = np.abs(m0).max() if m0.size else 0.0
    if norm_m == 0.0:
        zero = np.zeros_like(m0)
        return PcpSolution(zero, zero.copy(), 1, 0, 0.0, 0, 0, True,
                           time.perf_counter() - t0,
                           cfg.lam if cfg.lam is not None else default_lambda(n1, n2),
                           cfg.beta if cfg.beta is not None else 0.0)

    lam = cfg.lam if cfg.lam is not None else default_lambda(n1, n2)
    beta = cfg.beta if cfg.beta is not None else default_beta(m0)
    rank_guess = cfg.rank_guess if cfg.rank_guess is not None else min(10, min(n1, n2))
    svt_engine = _ScheduledSvt(min(n1, n2), rank_guess, cfg.full_svd_threshold)

    l = np.zeros_like(m0)
    s = np.zeros_like(m0)
    y = np.zeros_like(m0)
    sigma_l = np.empty(0)
    residual = np.inf
    converged = False
    iterations = 0

    for iterations in range(1, cfg.max_iters + 1):
        a = m0 - l + y / beta
        if shrink_on_obs:
            s_fit = np.sign(a) * np.maximum(np.abs(a) - lam / beta, 0.0)
        else:
            s_fit = np.zeros_like(a)
        if obs is None:
            s = s_fit
            g = m0 - s + y / beta
        else:
            s = np.where(obs, s_fit, 0.0)
            g = np.where(obs, m0 - s + y / beta, l)
        l, sigma_l = svt_engine.apply(g, 1.0 / beta)
        if step_hook is not None:
            step_hook(iterations, g, l)
        if obs is not None:
            s = np.where(obs, s, m0 - l + y / beta)
        r = m0 - l - s
        y = y + beta * r
        residual = float(np.linalg.norm(r) / norm_m)
        if residual <= cfg.tol:
            converged = True
            break

    return PcpSolution(
        l_hat=l,
        s_hat=s,
        iterations=iterations,
        svd_count=svt_engine.svd_count,
        final_residual=residual,
        rank_l=numerical_rank(sigma_l, n1, n2),
        card_s=int((np.abs(s) > 1e-6 * linf_m).sum()),
        converged=converged,
        wall_time=time.perf_counter() - t0,
        lam=lam,
        beta=beta,
        svd_retries=svt_engine.retries,
    )


def solve_pcp(m, cfg: SolverConfig | None = None, step_hook=None) -> PcpSolution:
    """Separate ``m`` into low-rank + sparse; see the module docstring.

    Non-convergence within ``cfg.max_iters`` is reported via
    ``converged=False``, not raised.
    """
    return _alm(m, None, True, cfg or SolverConfig(), step_hook)


def _completion_inputs(y_obs, obs: SupportMask):
    y_obs = check_finite(as_matrix(y_obs), "observed matrix")
    if y_obs.shape != (obs.rows, obs.cols):
        raise ValueError(f"shape mismatch: matrix {y_obs.shape}, mask ({obs.rows}, {obs.cols})")
    if len(obs) == 0:
        raise ValueError("observation mask is empty; nothing to fit")
    ob = obs.to_bool()
    return np.where(ob, y_obs, 0.0), ob


def solve_pcp_completion(y_obs, obs: SupportMask, cfg: SolverConfig | None = None,
                         step_hook=None) -> PcpSolution:
    """Robust completion: fit observed entries up to a sparse corruption.

    ``y_obs`` is zero-filled off ``obs``.  Default lambda generalizes the
    fully-observed rule by the observed fraction: 1/sqrt(p_obs * max(n1, n2)).
    """
    m0, ob = _completion_inputs(y_obs, obs)
    cfg = cfg or SolverConfig()
    if cfg.lam is None:
        p_obs = len(obs) / (obs.rows * obs.cols)
        cfg = dataclasses.replace(cfg, lam=1.0 / np.sqrt(p_obs * max(m0.shape)))
    return _alm(m0, ob, True, cfg, step_hook)


def solve_nuclear_completion(y_obs, obs: SupportMask, cfg: SolverConfig | None = None,
                             step_hook=None) -> PcpSolution:
    """Nuclear-norm completion: observations enforced exactly (no corruption
    allowance); ``s_hat`` holds the unobserved-entry slack."""
    m0, ob = _completion_inputs(y_obs, obs)
    return _alm(m0, ob, False, cfg or SolverConfig(), step_hook)
