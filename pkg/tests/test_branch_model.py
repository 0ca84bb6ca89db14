"""Classical branch model: closed forms, round trips and structural identities."""

import math

import pytest
from scipy.optimize import brentq

from branchedham.branch_model import (
    MU_BARE,
    BranchSign,
    ModelParams,
    branch_hamiltonian_k1,
    canonical_momentum_k1,
    f_of_v,
    fprime_of_v,
    general_branch_hamiltonian,
    general_mixed_hamiltonian,
    general_momentum_parametric,
    kinetic_constant,
    sample_branch_curve,
    velocity_branches,
)
from branchedham.errors import DomainError


# --------------------------------------------------------------------- kinetic constant

def test_kinetic_constant_k1_closed_form():
    assert kinetic_constant(1) == pytest.approx(3.0 * 0.25 ** (2.0 / 3.0), rel=1e-15)
    assert kinetic_constant(1) == pytest.approx(1.19055, abs=5e-6)


def test_kinetic_constant_k2_high_precision():
    # frozen from a 30-digit evaluation of ((2k+1)/(2k-1)) * (1/4)**(2/(2k+1))
    assert kinetic_constant(2) == pytest.approx(0.957248629164195839, rel=1e-15)


def test_kinetic_constant_large_k_limit():
    assert abs(kinetic_constant(50) - 1.0) < 0.05
    # monotone approach to 1 from below once past the shallow dip at k = 3
    vals = [kinetic_constant(k) for k in range(3, 51)]
    assert all(a < b < 1.0 for a, b in zip(vals, vals[1:]))


def test_kinetic_constant_rejects_k0():
    with pytest.raises(DomainError):
        kinetic_constant(0)


# ------------------------------------------------------------- general branch Hamiltonian

def test_general_branch_k1_unit_momentum():
    assert general_branch_hamiltonian(1.0, 1, BranchSign.PLUS) == pytest.approx(1.5, rel=1e-15)
    assert general_branch_hamiltonian(1.0, 1, BranchSign.MINUS) == pytest.approx(0.5, rel=1e-15)


def test_general_branch_k2_at_p4():
    expected = 4.0 + (1.0 / 6.0) * 4.0 ** -1.5
    assert general_branch_hamiltonian(4.0, 2, BranchSign.PLUS) == pytest.approx(
        expected, rel=1e-15
    )
    assert expected == pytest.approx(4.0 + 1.0 / 48.0, rel=1e-15)


def test_general_branch_rejects_nonpositive_p():
    with pytest.raises(DomainError):
        general_branch_hamiltonian(0.0, 1, BranchSign.PLUS)
    with pytest.raises(DomainError):
        general_branch_hamiltonian(-1.0, 2, BranchSign.MINUS)


# --------------------------------------------------------------------------- f and f'

def test_f_of_v_at_v1_is_lambda():
    params = ModelParams.from_lambda_delta(2.5, 0.1)
    assert f_of_v(1.0, params) == pytest.approx(2.5, rel=1e-15)


def test_f_of_v_zero_params():
    params = ModelParams.from_lambda_delta(0.0, 0.0)
    for v in (-3.0, 0.0, 1.0, 2.0, 10.0):
        assert f_of_v(v, params) == 0.0


def test_f_of_v_exact_cube():
    params = ModelParams.from_lambda_delta(1.0, 0.1)
    assert f_of_v(9.0, params) == pytest.approx(9.0 + 0.3 * 2.0, rel=1e-14)


def test_f_requires_delta():
    params = ModelParams.from_gamma(0.5)
    with pytest.raises(DomainError):
        f_of_v(2.0, params)
    with pytest.raises(DomainError):
        fprime_of_v(2.0, params)


def test_fprime_matches_numerical_derivative():
    params = ModelParams.from_lambda_delta(1.0, 0.1)
    for v in (0.2, 1.5, 3.0, 9.0):
        d = 1e-6 * max(1.0, abs(v - 1.0))
        fd = (f_of_v(v + d, params) - f_of_v(v - d, params)) / (2.0 * d)
        assert fprime_of_v(v, params) == pytest.approx(fd, rel=1e-7)


# ------------------------------------------------------------------ canonical momentum

def test_canonical_momentum_exact_power():
    params = ModelParams.from_lambda_delta(0.0, 0.0)
    assert params.mu == pytest.approx(MU_BARE, rel=1e-15)
    assert canonical_momentum_k1(1.125, params) == pytest.approx(
        4.0 ** (1.0 / 3.0), rel=1e-14
    )


def test_canonical_momentum_even_in_v_minus_1():
    params = ModelParams.from_lambda_delta(1.0, 0.0)
    eps = 0.3
    assert canonical_momentum_k1(1.0 + eps, params) == canonical_momentum_k1(
        1.0 - eps, params
    )


def test_canonical_momentum_large_v_limit():
    params = ModelParams.from_lambda_delta(2.0, 0.0)
    p = canonical_momentum_k1(1e9, params)
    assert p > -2.0
    assert p == pytest.approx(-2.0, abs=1e-5)


def test_canonical_momentum_rejects_v1():
    params = ModelParams.from_lambda_delta(0.0, 0.0)
    with pytest.raises(DomainError):
        canonical_momentum_k1(1.0, params)


# ------------------------------------------------------------------- velocity branches

def test_velocity_branches_quarter_gamma():
    params = ModelParams.from_gamma(0.25, lam=0.0)
    vp, vm = velocity_branches(1.0, params)
    assert vp == pytest.approx(0.75, rel=1e-15)
    assert vm == pytest.approx(1.25, rel=1e-15)


def test_velocity_branches_unit_correction():
    params = ModelParams.from_lambda_delta(1.0, 0.0)
    p = params.mu - params.lam
    vp, vm = velocity_branches(p, params)
    assert vp == pytest.approx(0.0, abs=1e-14)
    assert vm == pytest.approx(2.0, rel=1e-14)


def test_velocity_branches_large_p_limit():
    params = ModelParams.from_gamma(0.5)
    vp, vm = velocity_branches(1e10, params)
    assert vp == pytest.approx(1.0, abs=1e-14)
    assert vm == pytest.approx(1.0, abs=1e-14)


def test_velocity_branches_cusp_boundary():
    params = ModelParams.from_lambda_delta(1.0, 0.0)
    with pytest.raises(DomainError):
        velocity_branches(-1.0, params)


def test_velocity_deviations_match_branches():
    from branchedham.branch_model import momentum_from_deviation, velocity_deviations

    params = ModelParams.from_lambda_delta(1.0, 0.0)
    p = 2.0
    wp, wm = velocity_deviations(p, params)
    vp, vm = velocity_branches(p, params)
    assert 1.0 + wp == vp and 1.0 + wm == vm
    assert wp == -wm
    # deviation-variable round trip is exact to a few ulps
    for w in (wp, wm):
        assert momentum_from_deviation(w, params) == pytest.approx(p, rel=1e-14)
    with pytest.raises(DomainError):
        momentum_from_deviation(0.0, params)


def test_velocity_roundtrip_by_rootfinding():
    # invert the closed-form momentum numerically and compare to the branch value
    params = ModelParams.from_lambda_delta(0.0, 0.0)
    p = 1.0
    vp, vm = velocity_branches(p, params)
    root = brentq(lambda v: canonical_momentum_k1(v, params) - p, 0.01, 0.999999)
    assert root == pytest.approx(vp, rel=1e-10)
    root = brentq(lambda v: canonical_momentum_k1(v, params) - p, 1.000001, 100.0)
    assert root == pytest.approx(vm, rel=1e-10)


# ------------------------------------------------------------------ branch Hamiltonians

def test_branch_hamiltonian_reference_point():
    # lam = 1, gamma = 1/2, p = 1: 2 +- 2*(1/2)/sqrt(2)
    params = ModelParams.from_gamma(0.5, lam=1.0)
    assert branch_hamiltonian_k1(1.0, BranchSign.PLUS, params) == pytest.approx(
        2.0 + math.sqrt(0.5), rel=1e-15
    )
    assert branch_hamiltonian_k1(1.0, BranchSign.PLUS, params) == pytest.approx(
        2.70711, abs=5e-6
    )


def test_branch_hamiltonian_minus_cancellation():
    # at p + lam = (2*gamma)**(2/3) the Minus branch value is exactly 0 for gamma=1/2
    params = ModelParams.from_gamma(0.5, lam=0.0)
    p = (2.0 * params.gamma) ** (2.0 / 3.0)
    assert branch_hamiltonian_k1(p, BranchSign.MINUS, params) == pytest.approx(
        0.0, abs=1e-14
    )


def test_branch_hamiltonian_matches_general_at_quarter_gamma():
    params = ModelParams.from_gamma(0.25, lam=0.0)
    for p in (1e-3, 0.1, 1.0, 10.0, 1e3):
        for sign in BranchSign:
            a = branch_hamiltonian_k1(p, sign, params)
            b = general_branch_hamiltonian(p, 1, sign)
            assert a == pytest.approx(b, rel=1e-13)


def test_branch_hamiltonian_requires_positive_gamma():
    params = ModelParams.from_gamma(-1.0)
    with pytest.raises(DomainError):
        branch_hamiltonian_k1(1.0, BranchSign.PLUS, params)


# ------------------------------------------------------------------ parametric momentum

def test_general_momentum_matches_closed_form_delta0():
    params = ModelParams.from_lambda_delta(0.5, 0.0)
    for v in (0.3, 0.9, 1.2, 5.0):
        assert general_momentum_parametric(
            v, 1, params.lam
        ) == pytest.approx(canonical_momentum_k1(v, params), rel=1e-14)


def test_general_momentum_matches_closed_form_delta_nonzero():
    params = ModelParams.from_lambda_delta(1.0, 0.1)
    for v in (0.3, 0.9, 1.2, 5.0):
        assert general_momentum_parametric(
            v, 1, fprime_of_v(v, params)
        ) == pytest.approx(canonical_momentum_k1(v, params), rel=1e-13)


def test_general_momentum_k2_point():
    assert general_momentum_parametric(2.0, 2, 0.0) == pytest.approx(
        0.25 ** (2.0 / 5.0), rel=1e-15
    )


# --------------------------------------------------------------------- mixed Hamiltonian

def test_mixed_hamiltonian_on_shell_identity():
    # evaluated at the on-shell velocity of each branch, the mixed form
    # reproduces the momentum-space branch Hamiltonian
    params = ModelParams.from_lambda_delta(0.0, 0.0)
    for p in (0.5, 1.0, 4.0):
        vp, vm = velocity_branches(p, params)
        for sign, v in ((BranchSign.PLUS, vp), (BranchSign.MINUS, vm)):
            mixed = general_mixed_hamiltonian(v, p, 1, params.lam, 0.0, sign)
            assert mixed == pytest.approx(
                branch_hamiltonian_k1(p, sign, params), rel=1e-13
            )


def test_mixed_hamiltonian_additive_potential():
    a = general_mixed_hamiltonian(2.0, 1.0, 1, 0.0, 5.0, BranchSign.PLUS)
    b = general_mixed_hamiltonian(2.0, 1.0, 1, 0.0, 0.0, BranchSign.PLUS)
    assert a - b == 5.0


def test_mixed_hamiltonian_sign_flip_changes_only_pm_term():
    v, p, k = 2.0, 1.0, 2
    a = general_mixed_hamiltonian(v, p, k, 0.0, 0.0, BranchSign.PLUS)
    b = general_mixed_hamiltonian(v, p, k, 0.0, 0.0, BranchSign.MINUS)
    s = p + 0.0
    pm_term = 0.25 * s ** (-(2 * k - 1) / 2.0) * ((2 * k + 1) / (2 * k - 1) - p / s)
    assert 0.5 * (a + b) == pytest.approx(p, rel=1e-14)   # sign-independent part
    assert 0.5 * (a - b) == pytest.approx(pm_term, rel=1e-14)


# -------------------------------------------------------------------------- curve sampling

def test_sample_branch_curve_two_points():
    params = ModelParams.from_gamma(0.5, lam=1.0)
    curve = sample_branch_curve(-0.9, 5.0, 2, BranchSign.PLUS, params)
    assert len(curve.points) == 2
    assert curve.points[0][0] == -0.9
    assert curve.points[-1][0] == 5.0


def test_sample_branch_curve_plus_above_minus_and_min_location():
    params = ModelParams.from_gamma(0.5, lam=1.0)
    plus = sample_branch_curve(-0.9, 5.0, 500, BranchSign.PLUS, params)
    minus = sample_branch_curve(-0.9, 5.0, 500, BranchSign.MINUS, params)
    for (pa, ha), (pb, hb) in zip(plus.points, minus.points):
        assert ha >= hb
    # the Plus curve has its minimum where p + lam = gamma**(2/3)
    ps = [pt[0] for pt in plus.points]
    hs = [pt[1] for pt in plus.points]
    p_star = ps[hs.index(min(hs))]
    assert p_star + params.lam == pytest.approx(params.gamma ** (2.0 / 3.0), abs=0.02)


def test_sample_branch_curve_rejects_bad_ranges():
    params = ModelParams.from_gamma(0.5, lam=1.0)
    with pytest.raises(DomainError):
        sample_branch_curve(2.0, 1.0, 10, BranchSign.PLUS, params)
    with pytest.raises(DomainError):
        sample_branch_curve(-1.5, 1.0, 10, BranchSign.PLUS, params)
    with pytest.raises(DomainError):
        sample_branch_curve(0.0, 1.0, 1, BranchSign.PLUS, params)


# ---------------------------------------------------------------------- parameter checks

def test_params_validation():
    with pytest.raises(DomainError):
        ModelParams.from_lambda_delta(-1.0, 0.0)
    with pytest.raises(DomainError):
        ModelParams.from_lambda_delta(0.0, MU_BARE)
    with pytest.raises(DomainError):
        ModelParams.from_lambda_delta(0.0, 0.0, k=0)
    p = ModelParams.from_lambda_delta(0.0, 0.0)
    assert p.gamma == pytest.approx(0.25, rel=1e-15)


def test_from_gamma_negative_keeps_no_mu():
    p = ModelParams.from_gamma(-2.0)
    assert p.mu is None and p.delta is None
    with pytest.raises(DomainError):
        canonical_momentum_k1(2.0, p)
