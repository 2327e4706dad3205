import numpy as np
import pytest

from pcpursuit import (
    RngState,
    SupportMask,
    TangentSpace,
    gen_gaussian,
    norms,
    op_norm_composed,
    proj_support,
    proj_tangent,
    proj_tangent_complement,
    shrink,
    svt,
)
from pcpursuit.core import svd_full

from _oracles import (
    composed_norm_dense,
    grid_prox_scalar,
    svt_optimality_residuals,
)


def random_tangent(n1, n2, r, seed):
    """Orthonormal bases from the SVD of a random rank-r product."""
    rng = RngState(seed)
    x = gen_gaussian(rng.derive("x"), n1, r, 1.0)
    y = gen_gaussian(rng.derive("y"), n2, r, 1.0)
    f = svd_full(x @ y.T)
    return TangentSpace(f.u[:, :r].copy(), f.v[:, :r].copy())


# --- shrink -------------------------------------------------------------------

def test_shrink_formula_cases():
    assert shrink(np.array([[2.0]]), 1.5) == pytest.approx(np.array([[0.5]]))
    assert shrink(np.array([[-0.7]]), 1.0) == pytest.approx(np.array([[0.0]]))
    x = gen_gaussian(RngState(1), 4, 4, 1.0)
    assert np.array_equal(shrink(x, 0.0), x)


def test_shrink_sign_of_zero():
    assert shrink(np.array([[0.0, -0.0]]), 0.5)[0, 0] == 0.0


def test_shrink_matches_grid_search_prox():
    x = gen_gaussian(RngState(2), 5, 3, 1.0)
    out = shrink(x, 0.6)
    for i in range(5):
        for j in range(3):
            expected = grid_prox_scalar(x[i, j], 0.6)
            assert abs(out[i, j] - expected) <= 1e-4


def test_shrink_rejects_negative_tau():
    with pytest.raises(ValueError):
        shrink(np.zeros((2, 2)), -0.1)


# --- svt ----------------------------------------------------------------------

def test_svt_zero_matrix():
    out, k = svt(np.zeros((3, 4)), 0.5)
    assert np.array_equal(out, np.zeros((3, 4)))
    assert k == 0


def test_svt_diagonal():
    out, k = svt(np.diag([3.0, 1.0]), 2.0)
    assert np.allclose(out, np.diag([1.0, 0.0]))
    assert k == 1


def test_svt_optimality_conditions():
    x = gen_gaussian(RngState(3), 12, 9, 1.0)
    tau = 0.3
    z, _ = svt(x, tau)
    op, pairing_err = svt_optimality_residuals(x, z, tau)
    assert op <= tau + 1e-8
    assert pairing_err <= 1e-8


@pytest.mark.parametrize("seed", range(4))
def test_shrink_and_svt_nonexpansive(seed):
    rng = RngState(seed, 13)
    x = gen_gaussian(rng.derive("a"), 8, 6, 1.0)
    y = gen_gaussian(rng.derive("b"), 8, 6, 1.0)
    for tau in (0.1, 0.7):
        assert np.linalg.norm(shrink(x, tau) - shrink(y, tau)) <= np.linalg.norm(x - y) + 1e-12
        zx, _ = svt(x, tau)
        zy, _ = svt(y, tau)
        assert np.linalg.norm(zx - zy) <= np.linalg.norm(x - y) + 1e-12


def test_svt_shrink_never_increase_norms():
    x = gen_gaussian(RngState(9), 10, 7, 1.0)
    z, _ = svt(x, 0.4)
    assert norms(z)["nuclear"] <= norms(x)["nuclear"] + 1e-10
    assert norms(shrink(x, 0.4))["l1"] <= norms(x)["l1"] + 1e-10


# --- support projection ---------------------------------------------------------

def test_proj_support_cases():
    x = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(proj_support(x, SupportMask.full(2, 2)), x)
    assert np.array_equal(proj_support(x, SupportMask.empty(2, 2)), np.zeros((2, 2)))
    single = SupportMask(2, 2, [(0, 1)])
    assert np.array_equal(proj_support(x, single), [[0.0, 2.0], [0.0, 0.0]])


def test_proj_support_shape_mismatch():
    with pytest.raises(ValueError):
        proj_support(np.zeros((2, 3)), SupportMask.full(2, 2))


# --- tangent projection ---------------------------------------------------------

def test_proj_tangent_fixed_point():
    t = random_tangent(10, 8, 3, 21)
    rng = RngState(22)
    a = gen_gaussian(rng.derive("a"), 8, 3, 1.0)
    b = gen_gaussian(rng.derive("b"), 10, 3, 1.0)
    x = t.u @ a.T + b @ t.v.T
    assert np.abs(proj_tangent(x, t) - x).max() < 1e-10


def test_proj_tangent_rank_zero():
    t = TangentSpace(np.zeros((5, 0)), np.zeros((4, 0)))
    x = gen_gaussian(RngState(23), 5, 4, 1.0)
    assert np.array_equal(proj_tangent(x, t), np.zeros((5, 4)))
    assert np.array_equal(proj_tangent_complement(x, t), x)


def test_proj_tangent_idempotent_and_orthogonal():
    t = random_tangent(15, 15, 3, 24)
    x = gen_gaussian(RngState(25), 15, 15, 1.0)
    px = proj_tangent(x, t)
    qx = proj_tangent_complement(x, t)
    assert np.abs(proj_tangent(px, t) - px).max() < 1e-10
    assert abs(np.vdot(px, qx)) < 1e-10
    assert np.abs(px + qx - x).max() < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_projections_self_adjoint(seed):
    t = random_tangent(9, 11, 2, seed + 30)
    mask = SupportMask.from_bool(RngState(seed, 40).generator().random((9, 11)) < 0.3)
    rng = RngState(seed, 41)
    x = gen_gaussian(rng.derive("x"), 9, 11, 1.0)
    y = gen_gaussian(rng.derive("y"), 9, 11, 1.0)
    assert np.vdot(proj_tangent(x, t), y) == pytest.approx(np.vdot(x, proj_tangent(y, t)), abs=1e-10)
    assert np.vdot(proj_support(x, mask), y) == pytest.approx(np.vdot(x, proj_support(y, mask)), abs=1e-10)


def test_tangent_space_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        TangentSpace(np.ones((4, 2)), np.ones((4, 2)))


# --- composed operator norm -----------------------------------------------------

def test_op_norm_empty_mask_is_zero():
    t = random_tangent(8, 8, 2, 50)
    assert op_norm_composed(SupportMask.empty(8, 8), t) == 0.0


def test_op_norm_full_mask_is_one():
    t = random_tangent(8, 8, 2, 51)
    assert op_norm_composed(SupportMask.full(8, 8), t) == pytest.approx(1.0, abs=1e-6)


def test_op_norm_matches_dense_assembly():
    from pcpursuit import gen_uniform_mask

    n, r = 12, 2
    t = random_tangent(n, n, r, 3)
    mask = gen_uniform_mask(RngState(3, 99), n, n, 20)
    value = op_norm_composed(mask, t, tol=1e-13)
    oracle = composed_norm_dense(mask.to_bool(), t.u, t.v)
    assert value == pytest.approx(oracle, abs=1e-8)


# --- leverage bound --------------------------------------------------------------

def test_tangent_leverage_bound_against_incoherence():
    from pcpursuit import incoherence

    rng = RngState(60)
    x = gen_gaussian(rng.derive("x"), 20, 3, 1.0)
    y = gen_gaussian(rng.derive("y"), 18, 3, 1.0)
    l = x @ y.T
    rep = incoherence(l)
    t = TangentSpace.from_low_rank(l)
    a = (t.u * t.u).sum(axis=1)
    b = (t.v * t.v).sum(axis=1)
    lev = np.sqrt(a[:, None] + b[None, :] - np.outer(a, b))
    # spot-check the closed form against a direct projection
    e = np.zeros((20, 18))
    e[4, 7] = 1.0
    assert np.linalg.norm(proj_tangent(e, t)) == pytest.approx(lev[4, 7], abs=1e-12)
    assert lev.max() <= np.sqrt(2 * rep.mu * rep.r / min(20, 18)) + 1e-8
