"""Dense-matrix core: SVD (full and truncated), norms, random generation.

Matrices are plain float64 2-D ``numpy.ndarray`` objects throughout the
package; this module supplies the factorizations and generators everything
else is built from.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .rng import RngState

_EPS = np.finfo(np.float64).eps

# Dimension below which a "truncated" SVD is just a sliced full SVD; ARPACK
# brings no benefit on tiny problems and needs k < min(shape).
_SMALL_FULL_SVD = 16


class NumericalError(RuntimeError):
    """An iterative numerical routine failed to converge."""


def as_matrix(a) -> np.ndarray:
    """Validate and return `a` as a 2-D float64 array."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    return m


def check_finite(m: np.ndarray, what: str = "matrix") -> np.ndarray:
    if not np.isfinite(m).all():
        raise ValueError(f"{what} contains NaN or Inf entries")
    return m


def numerical_rank(sigma: np.ndarray, rows: int, cols: int) -> int:
    """Count singular values above max(rows, cols) * eps * sigma_max."""
    sigma = np.asarray(sigma)
    if sigma.size == 0 or sigma[0] <= 0:
        return 0
    return int((sigma > max(rows, cols) * _EPS * sigma[0]).sum())


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD triple: u (n1 x k), sigma (k, nonincreasing), v (n2 x k)."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def k(self) -> int:
        return self.sigma.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.T

    def numerical_rank(self) -> int:
        return numerical_rank(self.sigma, self.u.shape[0], self.v.shape[0])


def _fix_signs(u: np.ndarray, v: np.ndarray):
    # Deterministic sign convention: in each singular pair, the entry of
    # largest magnitude in the left vector is made nonnegative (first such
    # entry wins ties, which is what argmax returns).
    if u.shape[1] == 0:
        return u, v
    idx = np.argmax(np.abs(u), axis=0)
    flip = u[idx, np.arange(u.shape[1])] < 0
    u[:, flip] *= -1.0
    v[:, flip] *= -1.0
    return u, v


def svd_full(m) -> SvdFactors:
    """Thin SVD with k = min(rows, cols) and the package sign convention.

    Raises NumericalError if neither LAPACK driver converges (never silent).
    """
    m = check_finite(as_matrix(m))
    try:
        u, s, vt = scipy.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError:
        try:
            u, s, vt = scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"SVD did not converge on a {m.shape} matrix") from exc
    u, v = _fix_signs(u, vt.T.copy())
    return SvdFactors(u, s, v)


# Fixed ARPACK start vector so truncated factorizations are deterministic.
def _svds_start(n: int) -> np.ndarray:
    return RngState(0x5EED, n).generator().standard_normal(n)


def svd_truncated(m, k: int) -> SvdFactors:
    """Top-k singular triplets of `m` (Lanczos for small k, else full SVD)."""
    m = check_finite(as_matrix(m))
    nmin = min(m.shape)
    if not 1 <= k <= nmin:
        raise ValueError(f"k must satisfy 1 <= k <= {nmin}, got {k}")
    if k == nmin or nmin <= _SMALL_FULL_SVD:
        f = svd_full(m)
        return SvdFactors(f.u[:, :k].copy(), f.sigma[:k].copy(), f.v[:, :k].copy())
    try:
        u, s, vt = scipy.sparse.linalg.svds(m, k=k, which="LM", v0=_svds_start(nmin))
    except scipy.sparse.linalg.ArpackNoConvergence as exc:
        raise NumericalError(f"truncated SVD (k={k}) did not converge on a {m.shape} matrix") from exc
    order = np.argsort(-s)
    u, v = _fix_signs(u[:, order], vt[order].T.copy())
    return SvdFactors(u, s[order], v)


def norms(m) -> dict:
    """The five norms: operator, frobenius, nuclear, l1 (entrywise), linf."""
    m = check_finite(as_matrix(m))
    sigma = svd_full(m).sigma
    return {
        "operator": float(sigma[0]) if sigma.size else 0.0,
        "frobenius": float(np.linalg.norm(m)),
        "nuclear": float(sigma.sum()),
        "l1": float(np.abs(m).sum()),
        "linf": float(np.abs(m).max()) if m.size else 0.0,
    }


def gen_gaussian(rng: RngState, rows: int, cols: int, stddev: float) -> np.ndarray:
    """I.i.d. N(0, stddev^2) matrix, a pure function of (rng, rows, cols, stddev)."""
    if stddev <= 0:
        raise ValueError(f"stddev must be positive, got {stddev}")
    return rng.generator().normal(0.0, stddev, size=(rows, cols))


@dataclass(frozen=True)
class SupportMask:
    """Index set Omega as sorted duplicate-free zero-based (i, j) pairs."""

    rows: int
    cols: int
    entries: np.ndarray  # (k, 2) int64, lexicographically sorted

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("mask shape must be positive")
        e = np.asarray(self.entries, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e[:, 0].min() < 0 or e[:, 0].max() >= self.rows:
                raise ValueError("mask row index out of range")
            if e[:, 1].min() < 0 or e[:, 1].max() >= self.cols:
                raise ValueError("mask column index out of range")
            order = np.lexsort((e[:, 1], e[:, 0]))
            e = e[order]
            if np.any((np.diff(e[:, 0]) == 0) & (np.diff(e[:, 1]) == 0)):
                raise ValueError("mask contains duplicate (i, j) pairs")
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_bool(cls, dense: np.ndarray) -> "SupportMask":
        dense = np.asarray(dense, dtype=bool)
        if dense.ndim != 2:
            raise ValueError("boolean mask must be 2-D")
        return cls(dense.shape[0], dense.shape[1], np.argwhere(dense))

    @classmethod
    def full(cls, rows: int, cols: int) -> "SupportMask":
        return cls.from_bool(np.ones((rows, cols), dtype=bool))

    @classmethod
    def empty(cls, rows: int, cols: int) -> "SupportMask":
        return cls(rows, cols, np.empty((0, 2), dtype=np.int64))

    def to_bool(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=bool)
        if len(self):
            dense[self.entries[:, 0], self.entries[:, 1]] = True
        return dense

    def __len__(self) -> int:
        return self.entries.shape[0]

    @property
    def density(self) -> float:
        return len(self) / (self.rows * self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SupportMask):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and np.array_equal(
            self.entries, other.entries
        )


def gen_bernoulli_mask(rng: RngState, rows: int, cols: int, rho: float) -> SupportMask:
    """Each (i, j) included independently with probability rho."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    if rho == 0.0:
        return SupportMask.empty(rows, cols)
    if rho == 1.0:
        return SupportMask.full(rows, cols)
    return SupportMask.from_bool(rng.generator().random((rows, cols)) < rho)


def gen_uniform_mask(rng: RngState, rows: int, cols: int, count: int) -> SupportMask:
    """Support of exact cardinality `count`, uniform among all such sets."""
    total = rows * cols
    if not 0 <= count <= total:
        raise ValueError(f"count must be in [0, {total}], got {count}")
    flat = rng.generator().choice(total, size=count, replace=False)
    dense = np.zeros(total, dtype=bool)
    dense[flat] = True
    return SupportMask.from_bool(dense.reshape(rows, cols))
