"""Proximal operators and the subspace projections the solver composes.

``shrink`` is the prox of the entrywise l1 norm, ``svt`` the prox of the
nuclear norm.  ``proj_support`` restricts to an index set; ``proj_tangent``
projects onto the span of matrices sharing row/column spaces with a given
low-rank matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import NumericalError, SupportMask, as_matrix, svd_full
from .rng import RngState


class PowerIterationError(NumericalError):
    """Power iteration hit its cap; ``estimate`` holds the best value so far."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


def shrink(x, tau: float) -> np.ndarray:
    """Soft-threshold every entry: sgn(x) * max(|x| - tau, 0), with sgn(0) = 0."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    x = as_matrix(x)
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


def svt(x, tau: float):
    """Soft-threshold the singular values of `x`.

    Returns the thresholded matrix and the count of singular values above
    tau (the rank of the result).
    """
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    f = svd_full(x)
    keep = int((f.sigma > tau).sum())
    out = (f.u[:, :keep] * (f.sigma[:keep] - tau)) @ f.v[:, :keep].T
    if keep == 0:
        out = np.zeros_like(as_matrix(x))
    return out, keep


def proj_support(x, omega: SupportMask) -> np.ndarray:
    """Keep entries on omega, zero elsewhere."""
    x = as_matrix(x)
    if x.shape != (omega.rows, omega.cols):
        raise ValueError(f"shape mismatch: matrix {x.shape}, mask ({omega.rows}, {omega.cols})")
    return np.where(omega.to_bool(), x, 0.0)


@dataclass(frozen=True)
class TangentSpace:
    """Orthonormal bases (u, v) of the row/column spaces defining the tangent
    space {u @ a.T + b @ v.T}; r = 0 (empty bases) is the zero subspace."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u, v = as_matrix(self.u), as_matrix(self.v)
        if u.shape[1] != v.shape[1]:
            raise ValueError("u and v must have the same number of columns")
        for name, b in (("u", u), ("v", v)):
            if b.shape[1]:
                gram = b.T @ b
                if np.abs(gram - np.eye(b.shape[1])).max() > 1e-10:
                    raise ValueError(f"{name} columns are not orthonormal to 1e-10")

    @property
    def rank(self) -> int:
        return self.u.shape[1]

    @property
    def shape(self):
        return (self.u.shape[0], self.v.shape[0])

    @classmethod
    def from_low_rank(cls, l) -> "TangentSpace":
        """Bases from the SVD of `l`, truncated at its numerical rank."""
        f = svd_full(l)
        r = f.numerical_rank()
        return cls(f.u[:, :r].copy(), f.v[:, :r].copy())


def proj_tangent(x, t: TangentSpace) -> np.ndarray:
    """u u' x + x v v' - u u' x v v', evaluated in O(n^2 r)."""
    x = as_matrix(x)
    if x.shape != t.shape:
        raise ValueError(f"shape mismatch: matrix {x.shape}, tangent space {t.shape}")
    if t.rank == 0:
        return np.zeros_like(x)
    utx = t.u.T @ x
    xv = x @ t.v
    return t.u @ utx + (xv - t.u @ (utx @ t.v)) @ t.v.T


def proj_tangent_complement(x, t: TangentSpace) -> np.ndarray:
    """Complement projection, computed as x - proj_tangent(x, t)."""
    return as_matrix(x) - proj_tangent(x, t)


def _power_start(shape, t: TangentSpace | None, rng: RngState) -> np.ndarray:
    ones = np.ones(shape) / np.sqrt(shape[0] * shape[1])
    x0 = proj_tangent(ones, t) if t is not None else ones
    n0 = np.linalg.norm(x0)
    if n0 > 1e-300:
        return x0 / n0
    x0 = rng.generator().standard_normal(shape)
    return x0 / np.linalg.norm(x0)


def _power_norm(apply_fn, x0: np.ndarray, tol: float, max_iters: int):
    """Largest |eigenvalue| of a self-adjoint map by power iteration.

    Returns (value, converged, iterations); value is the |Rayleigh quotient|
    at the last iterate.
    """
    x = x0
    lam_prev = None
    for it in range(1, max_iters + 1):
        y = apply_fn(x)
        lam = abs(float(np.vdot(x, y)))
        ny = np.linalg.norm(y)
        if ny <= 1e-13:
            # the map sends a unit vector to rounding noise: numerically zero
            return lam, True, it
        x = y / ny
        if lam_prev is not None and abs(lam - lam_prev) <= tol * max(lam, 1e-300):
            return lam, True, it
        lam_prev = lam
    return lam_prev if lam_prev is not None else 0.0, False, max_iters


def op_norm_composed(
    omega: SupportMask,
    t: TangentSpace,
    tol: float = 1e-9,
    max_iters: int = 5000,
) -> float:
    """Operator norm of P_Omega restricted to the tangent space.

    Power iteration on the self-adjoint positive map x -> P_T P_Omega P_T x;
    the returned value is the square root of its top eigenvalue.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if (omega.rows, omega.cols) != t.shape:
        raise ValueError("mask shape does not match tangent space")
    ob = omega.to_bool()

    def apply_fn(x):
        return proj_tangent(np.where(ob, proj_tangent(x, t), 0.0), t)

    x0 = _power_start(t.shape, t, RngState(0xC0FFEE, 0))
    lam, ok, _ = _power_norm(apply_fn, x0, tol, max_iters)
    if not ok:
        raise PowerIterationError(
            f"operator-norm power iteration did not converge in {max_iters} iterations",
            estimate=float(np.sqrt(lam)),
        )
    return float(np.sqrt(lam))
