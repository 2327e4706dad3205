import json
import math

import numpy as np
import pytest

from pcpursuit import (
    ProblemSpec,
    RngState,
    SupportMask,
    TangentSpace,
    build_wl_golfing,
    build_ws_neumann,
    certify_instance,
    gen_problem,
    gen_uniform_mask,
    golfing_partition,
    incoherence,
    measure_concentration,
    proj_support,
    proj_tangent,
    svd_full,
)
from pcpursuit.certify import SeriesDivergenceError, SeriesNonConvergenceError

from _oracles import deviation_norm_dense, ws_dense_solve


def tangent_from_instance(n, r, seed):
    inst = gen_problem(ProblemSpec(n, n, r, 0.0, "random", RngState(seed)))
    return TangentSpace.from_low_rank(inst.l0), inst.l0


# --- incoherence ------------------------------------------------------------

def test_incoherence_spiky_rank_one():
    n = 6
    l = np.zeros((n, n))
    l[0, 0] = 1.0
    rep = incoherence(l)
    assert rep.r == 1
    assert rep.mu1 == pytest.approx(n)
    assert rep.mu2 == pytest.approx(n)
    assert rep.mu3 == pytest.approx(n * n)
    assert rep.mu == pytest.approx(n * n)


def test_incoherence_flat_rank_one():
    n = 8
    rep = incoherence(np.ones((n, n)) / n)
    assert rep.r == 1
    assert rep.mu1 == pytest.approx(1.0)
    assert rep.mu2 == pytest.approx(1.0)
    assert rep.mu3 == pytest.approx(1.0)
    assert rep.mu == pytest.approx(1.0)


def test_incoherence_self_consistent_and_golden():
    inst = gen_problem(ProblemSpec(200, 200, 10, 0.0, "random", RngState(1)))
    rep = incoherence(inst.l0)
    assert rep.r == 10
    rep2 = incoherence(svd_full(inst.l0).reconstruct())
    assert rep2.mu == pytest.approx(rep.mu, abs=1e-10)
    # golden magnitude for this seed
    assert rep.mu == pytest.approx(29.135605031596146, abs=1e-9)
    assert rep.mu1 == pytest.approx(2.306788265808689, abs=1e-9)


def test_incoherence_zero_matrix_errors():
    with pytest.raises(ValueError):
        incoherence(np.zeros((5, 5)))


@pytest.mark.parametrize("seed", range(3))
def test_incoherence_at_least_one(seed):
    inst = gen_problem(ProblemSpec(25, 35, 3, 0.0, "random", RngState(seed, 7)))
    assert incoherence(inst.l0).mu >= 1.0


# --- concentration -----------------------------------------------------------

def test_concentration_full_sampling_vanishes():
    t, _ = tangent_from_instance(15, 2, 9)
    stats = measure_concentration(t, 1.0, RngState(9), trials=3)
    assert stats.max_deviation <= 1e-10
    assert stats.converged.all()


def test_concentration_matches_dense_assembly():
    n, r, rho0 = 12, 2, 0.5
    t, _ = tangent_from_instance(n, r, 9)
    rng = RngState(9, 3)
    stats = measure_concentration(t, rho0, rng, trials=1, tol=1e-13)
    # replicate the trial's mask draw and assemble the operator explicitly
    ob = rng.derive("concentration", 0).generator().random((n, n)) < rho0
    oracle = deviation_norm_dense(ob, t.u, t.v, rho0)
    assert stats.deviations[0] == pytest.approx(oracle, abs=1e-8)


def test_concentration_half_sampling_below_one():
    t, _ = tangent_from_instance(200, 2, 31)
    stats = measure_concentration(t, 0.5, RngState(31), trials=10)
    assert stats.converged.all()
    assert stats.max_deviation < 1.0


def test_concentration_validates_inputs():
    t, _ = tangent_from_instance(10, 1, 0)
    with pytest.raises(ValueError):
        measure_concentration(t, 0.0, RngState(0), 1)
    with pytest.raises(ValueError):
        measure_concentration(t, 0.5, RngState(0), 0)


# --- golfing construction -----------------------------------------------------

def test_golfing_partition_parameters():
    j0, q = golfing_partition(50, 0.02)
    assert j0 == 2 * math.ceil(math.log(50)) == 8
    assert q == pytest.approx(1.0 - 0.02 ** (1.0 / 8))
    # the complement of the union of j0 Ber(q) batches is exactly Ber(rho)
    assert (1.0 - q) ** j0 == pytest.approx(0.02)


def test_golfing_recursion_base_and_decay():
    n, r, rho = 50, 2, 0.02
    t, _ = tangent_from_instance(n, r, 21)
    w_l, omega, traj = build_wl_golfing(t, rho, RngState(21).derive("golfing"))
    uv = t.u @ t.v.T
    j0, _ = golfing_partition(n, rho)
    assert traj.z_frob.shape == (j0 + 1,)
    assert traj.z_frob[0] == pytest.approx(np.linalg.norm(uv), abs=1e-15)
    assert traj.z_linf[0] == pytest.approx(np.abs(uv).max(), abs=1e-15)
    assert traj.z_frob[-1] <= math.exp(-j0) * math.sqrt(r) * 10.0


def test_golfing_support_identity():
    # each batch avoids omega, so P_omega of the final correction vanishes
    # and the on-support residual equals the final z norm
    n, r, rho = 50, 2, 0.02
    t, _ = tangent_from_instance(n, r, 21)
    w_l, omega, traj = build_wl_golfing(t, rho, RngState(21).derive("golfing"))
    uv = t.u @ t.v.T
    on_support = np.linalg.norm(proj_support(uv + w_l, omega))
    assert on_support <= traj.z_frob[-1] * (1 + 1e-10) + 1e-12


def test_golfing_output_in_tangent_complement():
    t, _ = tangent_from_instance(40, 2, 5)
    w_l, _, _ = build_wl_golfing(t, 0.05, RngState(5).derive("golfing"))
    assert np.linalg.norm(proj_tangent(w_l, t)) <= 1e-8 * np.linalg.norm(w_l)


def test_golfing_induced_support_density():
    n, rho = 60, 0.1
    t, _ = tangent_from_instance(n, 2, 6)
    _, omega, _ = build_wl_golfing(t, rho, RngState(6).derive("golfing"))
    sd = math.sqrt(n * n * rho * (1 - rho))
    assert abs(len(omega) - rho * n * n) <= 4 * sd


def test_golfing_validates_inputs():
    t, _ = tangent_from_instance(10, 1, 0)
    with pytest.raises(ValueError):
        build_wl_golfing(t, 0.0, RngState(0))
    with pytest.raises(ValueError):
        build_wl_golfing(t, 1.0, RngState(0))


# --- sparse certificate component ----------------------------------------------

def test_ws_empty_support_is_zero():
    t, _ = tangent_from_instance(10, 2, 11)
    w_s = build_ws_neumann(t, np.zeros((10, 10)), SupportMask.empty(10, 10), 0.3)
    assert np.array_equal(w_s, np.zeros((10, 10)))


def test_ws_restricted_identity_and_complement():
    n, r = 16, 2
    t, _ = tangent_from_instance(n, r, 12)
    omega = gen_uniform_mask(RngState(12, 5), n, n, 14)
    signs = np.where(RngState(12, 6).generator().random((n, n)) < 0.5, 1.0, -1.0)
    s0 = proj_support(signs, omega)
    lam = 1.0 / math.sqrt(n)
    w_s = build_ws_neumann(t, s0, omega, lam)
    err = np.linalg.norm(proj_support(w_s, omega) - lam * np.sign(s0))
    assert err <= 1e-8 * lam
    assert np.linalg.norm(proj_tangent(w_s, t)) <= 1e-8 * np.linalg.norm(w_s)


def test_ws_matches_dense_restricted_solve():
    n, r = 12, 2
    t, _ = tangent_from_instance(n, r, 2)
    omega = gen_uniform_mask(RngState(2, 5), n, n, 10)
    signs = np.where(RngState(2, 6).generator().random((n, n)) < 0.5, 1.0, -1.0)
    s0 = proj_support(signs, omega)
    lam = 1.0 / math.sqrt(n)
    w_s = build_ws_neumann(t, s0, omega, lam)
    oracle = ws_dense_solve(t.u, t.v, s0, omega.to_bool(), lam)
    assert np.abs(w_s - oracle).max() <= 1e-8


def test_ws_divergence_raises():
    # support and tangent space overlap by dimension count, so the
    # composition is not contractive
    n, r = 12, 8
    t, _ = tangent_from_instance(n, r, 13)
    omega = gen_uniform_mask(RngState(13, 5), n, n, 80)
    s0 = proj_support(np.ones((n, n)), omega)
    with pytest.raises((SeriesDivergenceError, SeriesNonConvergenceError)):
        build_ws_neumann(t, s0, omega, 0.3)


# --- full certificate ------------------------------------------------------------

def test_certificate_report_pass_definition_and_json():
    rep = certify_instance(30, 1, 0.02, seed=0)
    expected = (
        rep.norm_w < 0.5
        and rep.frob_on_omega <= rep.lam / 4
        and rep.linf_off_omega < rep.lam / 2
    )
    assert rep.passed == expected
    payload = json.loads(rep.to_json())
    assert set(payload) == {
        "lambda", "rho", "j0", "q", "norm_w", "frob_on_omega", "linf_off_omega",
        "wl_norm", "ws_norm", "ws_linf_off", "pass",
    }
    assert payload["lambda"] == pytest.approx(1.0 / math.sqrt(30))
    assert payload["pass"] == rep.passed
    j0, q = golfing_partition(30, 0.02)
    assert payload["j0"] == j0 and payload["q"] == pytest.approx(q)


def test_certificate_negative_control_fails():
    rep = certify_instance(50, 25, 0.4, seed=0)
    assert not rep.passed


def test_certificate_deterministic():
    a = certify_instance(30, 1, 0.02, seed=3)
    b = certify_instance(30, 1, 0.02, seed=3)
    assert a == b
