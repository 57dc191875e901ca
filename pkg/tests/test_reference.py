"""Unit tests for the independent reference routes."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import exp1

from exbilap.errors import ParameterError, UnsupportedRegimeError
from exbilap.fiber import FiberParams
from exbilap.reference import (
    fd_lambda,
    negativity_threshold,
    secular_det,
    secular_lambda,
    ualpha_energy,
)

SECULAR_PIN = -0.03164098441037867


def test_secular_pinned_root():
    assert secular_lambda(2.0, -1.0, 1.0) == pytest.approx(SECULAR_PIN, rel=1e-12)


def test_secular_none_for_nonnegative_gamma():
    assert secular_lambda(2.0, 0.0, 1.0) is None
    assert secular_lambda(2.0, 1.0, 1.0) is None


def test_secular_requires_positive_tau():
    with pytest.raises(UnsupportedRegimeError):
        secular_lambda(0.0, -1.0, 1.0)


def test_secular_validation():
    with pytest.raises(ParameterError):
        secular_lambda(1.0, -1.0, -1.0)
    with pytest.raises(ParameterError):
        secular_lambda(1.0, -1.0, 1.0, grid=8)
    with pytest.raises(ParameterError):
        secular_det(1.0, -1.0, 1.0, 0.5)
    with pytest.raises(ParameterError):
        secular_det(1.0, -1.0, 1.0, -10.0)


def test_secular_resolves_weak_coupling_depths():
    # weak boundary coupling sends the eigenvalue double-exponentially
    # close to zero; the log-grid pass must still isolate it
    assert secular_lambda(1.0, -0.1, 0.5) == pytest.approx(
        -3.7411434005309904e-18, rel=1e-9
    )
    assert secular_lambda(4.0, -0.1, 0.5) == pytest.approx(
        -2.8853638354807627e-69, rel=1e-9
    )
    assert secular_lambda(4.0, -0.1, 1.0) == pytest.approx(
        -6.678209068437933e-35, rel=1e-9
    )


def test_secular_det_is_finite_across_the_bracket():
    lam = -np.geomspace(1e-3, 1e-60, 200)
    det = secular_det(4.0, -0.1, 0.5, lam)
    assert np.all(np.isfinite(det))


def test_fd_gamma_nonnegative_is_none():
    assert fd_lambda(FiberParams(1.0, 0.0, 1.0, 0)) is None
    assert fd_lambda(FiberParams(1.0, 0.3, 1.0, 1)) is None


def test_fd_matches_secular_radial():
    p = FiberParams(1.0, -1.0, 1.0, 0)
    sec = secular_lambda(1.0, -1.0, 1.0)
    fd = fd_lambda(p, h=0.02)
    assert abs(fd - sec) / abs(sec) <= 1e-4


def test_fd_handles_higher_modes():
    # cross-checked against the Hermite solver, which shares no code
    from exbilap.disk import solve_fiber, SolveControls

    p = FiberParams(1.0, -1.0, 2.0, 1)
    fe = solve_fiber(p, SolveControls(rtol=1e-6))
    fd = fd_lambda(p, h=0.02)
    assert abs(fd - fe.lam) / abs(fe.lam) <= 1e-4


def test_fd_stencil_order_is_two():
    p = FiberParams(1.0, -1.0, 1.0, 0)
    sec = secular_lambda(1.0, -1.0, 1.0)
    errs = [abs(fd_lambda(p, h=h, t=40.0, richardson=False) - sec)
            for h in (0.08, 0.04, 0.02)]
    orders = [math.log2(errs[k - 1] / errs[k]) for k in (1, 2)]
    for order in orders:
        assert 1.6 <= order <= 2.4, orders


def test_fd_validation():
    p = FiberParams(1.0, -1.0, 1.0, 0)
    with pytest.raises(ParameterError):
        fd_lambda(p, h=0.0)
    with pytest.raises(ParameterError):
        fd_lambda(p, h=0.5, t=1.0)


def test_ualpha_closed_form_at_alpha_one():
    exact = 2.0 * math.pi * (-7.0 / (8.0 * math.e) + exp1(1.0) / 4.0)
    assert abs(ualpha_energy(1.0, 0.0, -1.0, 1.0) - exact) <= 1e-8


def test_ualpha_small_alpha_limit():
    for gamma, radius in ((-1.0, 1.0), (-2.0, 0.7)):
        target = 2.0 * math.pi * gamma * math.exp(-1.0) * radius
        val = ualpha_energy(1e-3, 0.0, gamma, radius)
        assert abs(val - target) <= 0.01 * abs(target)


def test_ualpha_nonnegative_for_gamma_zero():
    for alpha in (0.3, 1.0, 2.0):
        assert ualpha_energy(alpha, 1.0, 0.0, 1.0) >= 0.0


def test_ualpha_validation():
    with pytest.raises(ParameterError):
        ualpha_energy(0.0, 1.0, -1.0, 1.0)
    with pytest.raises(ParameterError):
        ualpha_energy(-0.5, 1.0, -1.0, 1.0)


def test_ualpha_rayleigh_quotient_bounds_eigenvalue_above():
    # min-max: any trial quotient sits above the true minimum, here the
    # converged radial eigenvalue of (tau, gamma, R) = (0, -1, 1)
    from exbilap.disk import solve_fiber

    lam = solve_fiber(FiberParams(0.0, -1.0, 1.0, 0)).lam
    for alpha in (0.25, 0.5, 1.0):
        energy = ualpha_energy(alpha, 0.0, -1.0, 1.0)
        mass = 2.0 * math.pi * quad(
            lambda r: math.exp(-(r**alpha)) * r, 1.0, 200.0
        )[0]
        assert energy / mass >= lam - 1e-6 * abs(lam)


def test_negativity_threshold_brackets_the_sign_change():
    alpha_star = negativity_threshold(4.0, -0.1, 0.5)
    assert alpha_star == pytest.approx(0.02491343766450882, rel=1e-6)
    assert ualpha_energy(0.9 * alpha_star, 4.0, -0.1, 0.5) < 0.0
    assert ualpha_energy(1.1 * alpha_star, 4.0, -0.1, 0.5) > 0.0


def test_negativity_threshold_empty_for_nonnegative_gamma():
    assert negativity_threshold(1.0, 0.0, 1.0) == 0.0
    assert negativity_threshold(1.0, 0.7, 1.0) == 0.0
