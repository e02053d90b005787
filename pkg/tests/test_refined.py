"""Curvature-corrected transmission model: reduction to the flat family,
agreement with an independent consistent-mass discretization, and the
sqrt(h) coefficient identification."""

import pytest

import oracles
from proxspec import interface, refined
from proxspec.interface import TransmissionParams
from proxspec.refined import RefinedParams

# critical values at a = 1, m = 4, frozen from the root solve
# (residual < 3e-8) and the fiber minimization
ALPHA_14 = 0.8776957261
ETA_14 = 1.0325867418


def _params(h, beta, **kw):
    return RefinedParams(TransmissionParams(1.0, 4.0, ALPHA_14, ETA_14), h, beta, **kw)


def test_zero_curvature_reduces_to_flat_family():
    flat = interface.mu1(TransmissionParams(1.0, 4.0, ALPHA_14, ETA_14)).mu1
    v = refined.mu1_refined(_params(1e-12, 0.0), ETA_14)
    assert v == pytest.approx(flat, abs=1e-6)


def test_agrees_with_consistent_mass_discretization():
    # Same weighted form, entirely different discretization: full tridiagonal
    # P1 mass matrix, composite-Simpson element integrals, shift-invert
    # Lanczos.  Richardson on the oracle side too.
    p = _params(1e-4, 1.0)
    prod = refined.mu1_refined(p, ETA_14)
    v1 = oracles.consistent_fem_mu1(1.0, 4.0, ALPHA_14, 1.0, 1e-4, ETA_14, p.half_width, 4096)
    v2 = oracles.consistent_fem_mu1(1.0, 4.0, ALPHA_14, 1.0, 1e-4, ETA_14, p.half_width, 8192)
    assert prod == pytest.approx((4.0 * v2 - v1) / 3.0, abs=1e-7)


def test_energy_has_an_interior_minimum_in_the_window():
    # At coarse h the Dirichlet window is narrow enough to push the optimal
    # well center left of eta; the profile must still be a single interior
    # dip: rising toward the right edge and rising again far to the left.
    p = _params(1e-3, 1.0)
    prof = {dx: refined.mu1_refined(p, ETA_14 + dx) for dx in (-0.9, -0.6, -0.3, 0.0, 0.3)}
    assert prof[-0.6] < prof[-0.9]
    assert prof[-0.6] < prof[-0.3] < prof[0.0] < prof[0.3]


def test_params_invariants():
    assert _params(1e-4, 1.0).half_width == pytest.approx((1e-4) ** (refined.DELTA_DEFAULT - 0.5))
    with pytest.raises(ValueError):
        _params(0.0, 1.0)
    with pytest.raises(ValueError):
        _params(1e-4, 1.0, delta=0.2)
    with pytest.raises(ValueError):
        _params(1e-4, 1.0, delta=0.6)
    with pytest.raises(ValueError):
        _params(1.0, 2.0)  # weight 1 - beta*sqrt(h)*t would vanish in-window


def test_eta_hat_is_the_fiber_minimizer():
    assert refined.eta_hat(1.0, 4.0, ALPHA_14) == pytest.approx(ETA_14, abs=1e-6)


# ---------------------------------------------------------------------------
# sqrt(h) coefficient identification


@pytest.fixture(scope="module")
def sweep():
    return refined.expansion_check(1.0, 4.0, 1.0, (1e-2, 1e-3, 1e-4), alpha_hat=ALPHA_14)


def test_exactly_one_trace_sign_survives(sweep):
    assert sweep.trace_sign == "minus"
    coefs = interface.model_coefficients(1.0, 4.0, alpha=ALPHA_14)
    assert sweep.checks[0].d3 == pytest.approx(coefs.c_tilde1, abs=1e-12)


def test_winning_residuals_shrink_and_dominate(sweep):
    res = [c.residual for c in sweep.checks]
    bad = [c.residual for c in sweep.rejected]
    assert res[0] > res[1] > res[2] > 0.0
    assert bad[-1] >= 2.0 * res[-1]
    assert sweep.residual_order > 0.55


def test_second_order_coefficient_is_positive(sweep):
    assert sweep.checks[0].d2 > 0.0
    assert sweep.checks[0].d2 == pytest.approx(0.301907, abs=1e-4)


def test_negative_curvature_gives_the_same_sign():
    sw = refined.expansion_check(1.0, 4.0, -1.0, (1e-2, 1e-3, 1e-4), alpha_hat=ALPHA_14)
    assert sw.trace_sign == "minus"
    assert sw.residual_order > 0.55


def test_h_list_validation():
    with pytest.raises(ValueError):
        refined.expansion_check(1.0, 4.0, 1.0, (1e-3, 1e-2), alpha_hat=ALPHA_14)
    with pytest.raises(ValueError):
        refined.expansion_check(1.0, 4.0, 1.0, (1e-2, -1e-3), alpha_hat=ALPHA_14)
