"""Random problem instances with ground truth retained.

The low-rank part is a product of two i.i.d. Gaussian factors with entry
variance 1/max(n1, n2); the sparse part puts unit-magnitude entries on a
Bernoulli support, with signs either random (+-1 fair coin) or coherent
(matching the sign of the low-rank part, the harder model).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SupportMask, gen_bernoulli_mask, gen_gaussian
from .rng import RngState

SIGN_MODELS = ("random", "coherent")


@dataclass(frozen=True)
class ProblemSpec:
    n1: int
    n2: int
    r: int
    rho: float
    sign_model: str
    seed: RngState

    def __post_init__(self):
        if self.n1 <= 0 or self.n2 <= 0:
            raise ValueError("matrix dimensions must be positive")
        if not 0 <= self.r <= min(self.n1, self.n2):
            raise ValueError(f"rank must be in [0, {min(self.n1, self.n2)}], got {self.r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if self.sign_model not in SIGN_MODELS:
            raise ValueError(f"sign_model must be one of {SIGN_MODELS}, got {self.sign_model!r}")


@dataclass(frozen=True)
class ProblemInstance:
    l0: np.ndarray
    s0: np.ndarray
    m: np.ndarray
    omega: SupportMask
    spec: ProblemSpec


def _low_rank(rng: RngState, n1: int, n2: int, r: int) -> np.ndarray:
    if r == 0:
        return np.zeros((n1, n2))
    sd = 1.0 / np.sqrt(max(n1, n2))
    x = gen_gaussian(rng.derive("x"), n1, r, sd)
    y = gen_gaussian(rng.derive("y"), n2, r, sd)
    return x @ y.T


def _random_signs(rng: RngState, n1: int, n2: int) -> np.ndarray:
    return np.where(rng.generator().random((n1, n2)) < 0.5, 1.0, -1.0)


def gen_problem(spec: ProblemSpec) -> ProblemInstance:
    """Instance of the separation problem; m = l0 + s0 exactly.

    The support draw does not depend on the sign model, so 'random' and
    'coherent' instances with the same seed share omega.
    """
    l0 = _low_rank(spec.seed, spec.n1, spec.n2, spec.r)
    omega = gen_bernoulli_mask(spec.seed.derive("omega"), spec.n1, spec.n2, spec.rho)
    ob = omega.to_bool()
    if spec.sign_model == "random":
        values = _random_signs(spec.seed.derive("signs"), spec.n1, spec.n2)
    else:
        values = np.sign(l0)
    s0 = np.where(ob, values, 0.0)
    return ProblemInstance(l0, s0, l0 + s0, omega, spec)


def gen_completion_problem(spec: ProblemSpec, p_obs: float, tau: float, rng: RngState):
    """Undersampled, possibly corrupted instance.

    Observations are a Bernoulli(p_obs) mask; each observed entry is hit by
    an additive +-1 corruption independently with probability tau.  Returns
    (instance, obs_mask) where instance.omega is the corrupted set (a subset
    of obs_mask) and instance.m = l0 + s0, so the observed data matrix is
    ``proj_support(instance.m, obs_mask)``.

    All randomness comes from ``rng``; spec.rho and spec.sign_model are
    ignored (corruption density is tau, signs are random).  With p_obs = 1
    the draw coincides bitwise with gen_problem at rho = tau.
    """
    if not 0.0 < p_obs <= 1.0:
        raise ValueError(f"p_obs must be in (0, 1], got {p_obs}")
    if not 0.0 <= tau < 1.0:
        raise ValueError(f"tau must be in [0, 1), got {tau}")
    l0 = _low_rank(rng, spec.n1, spec.n2, spec.r)
    obs = gen_bernoulli_mask(rng.derive("obs"), spec.n1, spec.n2, p_obs)
    hit = gen_bernoulli_mask(rng.derive("omega"), spec.n1, spec.n2, tau)
    corrupted = SupportMask.from_bool(obs.to_bool() & hit.to_bool())
    signs = _random_signs(rng.derive("signs"), spec.n1, spec.n2)
    s0 = np.where(corrupted.to_bool(), signs, 0.0)
    return ProblemInstance(l0, s0, l0 + s0, corrupted, spec), obs


def trim_support(s0: np.ndarray, omega: SupportMask, rng: RngState, fraction: float = 0.5):
    """Zero a random `fraction` of the support entries of s0.

    Device for exercising the fact that recovery is monotone under support
    trimming.  Returns (trimmed s0, trimmed mask).
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must be in [0, 1], got {fraction}")
    k = len(omega)
    drop = int(np.floor(k * fraction))
    if drop == 0:
        return s0.copy(), omega
    pick = rng.generator().choice(k, size=drop, replace=False)
    keep = np.ones(k, dtype=bool)
    keep[pick] = False
    trimmed = SupportMask(omega.rows, omega.cols, omega.entries[keep])
    return np.where(trimmed.to_bool(), s0, 0.0), trimmed
