"""Unit tests for the two-stage eigenvalue solver and the mode scan."""

import numpy as np
import pytest

from exbilap.disk import (
    CLASS_NONE,
    CLASS_RADIAL,
    GroundStateReport,
    SolveControls,
    ground_state,
    solve_fiber,
    sweep,
    sweep_csv_rows,
    SWEEP_COLUMNS,
)
from exbilap.errors import ConvergenceError, ParameterError
from exbilap.fiber import FiberParams, natural_bc_residual, profile_mass

SECULAR_PIN = -0.03164098441037867  # independent Bessel-determinant root


@pytest.fixture(scope="module")
def deep_solve():
    return solve_fiber(FiberParams(2.0, -1.0, 1.0, 0))


def test_gamma_nonnegative_returns_none():
    assert solve_fiber(FiberParams(1.0, 0.0, 1.0, 0)) is None
    assert solve_fiber(FiberParams(0.0, 2.5, 0.5, 2)) is None


def test_eigenvalue_matches_independent_oracle(deep_solve):
    assert deep_solve.lam == pytest.approx(SECULAR_PIN, rel=1e-6)


def test_eigenresult_contract(deep_solve):
    res = deep_solve
    assert res.converged is True
    assert res.residual_rel <= 1e-3
    assert len(res.record) >= 2
    t_final, n_final, lam_final = res.record[-1]
    assert t_final == res.profile.mesh.length
    assert n_final == res.profile.mesh.n_elems
    assert lam_final == res.lam
    assert res.profile.is_clamped()
    # unit mass normalization and a non-negative boundary anchor
    assert profile_mass(res.profile) == pytest.approx(1.0, abs=1e-10)
    assert res.profile.boundary_value > 0.0
    # Richardson extrapolation is a diagnostic near the reported value
    assert abs(res.richardson - res.lam) <= 1e-2 * abs(res.lam)


def test_bc_residual_accepts_solver_result(deep_solve):
    res = natural_bc_residual(deep_solve, FiberParams(2.0, -1.0, 1.0, 0))
    assert 0.0 < res.rel_second < 1e-3


def test_truncation_record_is_monotone(deep_solve):
    ts = [entry[0] for entry in deep_solve.record]
    assert all(t2 >= t1 for t1, t2 in zip(ts, ts[1:]))


def test_stall_guard_names_the_floor():
    # rounding noise of the assembled forms sits above this rtol here
    with pytest.raises(ConvergenceError, match="stalled"):
        solve_fiber(FiberParams(0.0, -0.1, 0.5, 0), SolveControls(rtol=1e-6))


def test_shallow_mode_below_detection_floor_is_none():
    # the n = 1 fiber of this point holds a state too shallow to separate
    # from the continuum edge at this atol; the solver must say so
    out = solve_fiber(
        FiberParams(0.0, -0.1, 2.0, 1), SolveControls(rtol=1e-4, atol=1e-6)
    )
    assert out is None


def test_controls_initial_t_default():
    assert SolveControls().initial_t(2.0) == 60.0
    assert SolveControls(t0=7.0).initial_t(2.0) == 7.0


def test_ground_state_radial_with_spectral_gap():
    rep = ground_state(0.0, -5.0, 1.0, SolveControls(rtol=1e-4, atol=1e-6))
    assert rep.classification == CLASS_RADIAL
    assert rep.n_star == 0
    assert rep.lam == pytest.approx(-7.228289, rel=1e-4)
    assert rep.results[1].lam == pytest.approx(-1.79191, rel=1e-3)
    assert rep.results[2] is None and rep.results[3] is None
    assert rep.tol == max(10.0 * 1e-4 * abs(rep.lam), 1e-10)


def test_ground_state_no_bound_state():
    rep = ground_state(1.0, 0.5, 1.0)
    assert rep.classification == CLASS_NONE
    assert rep.n_star is None and rep.lam is None


def test_ground_state_validation_and_mode_range():
    with pytest.raises(ParameterError):
        ground_state(1.0, -1.0, 1.0, n_max=-1)
    rep = ground_state(1.0, -1.0, 1.0, SolveControls(rtol=1e-4, atol=1e-6), n_max=1)
    assert sorted(rep.results) == [0, 1]


def test_ground_state_annotates_failing_mode():
    with pytest.raises(ConvergenceError, match="fiber n=0"):
        ground_state(0.0, -0.1, 0.5, SolveControls(rtol=1e-6))


def test_sweep_rows_and_determinism():
    controls = SolveControls(rtol=1e-4, atol=1e-6)
    args = ([1.0], [-1.0, 0.5], [1.0])
    rows = sweep(*args, controls=controls, n_max=1)
    assert len(rows) == 2
    assert rows[0].error is None and rows[1].error is None
    flat = sweep_csv_rows(rows)
    assert len(flat) == 4
    assert len(SWEEP_COLUMNS) == 9
    # found mode carries numbers, absent fiber leaves empty fields
    tau, gamma, radius, mode, lam, cls, t_final, n_final, resid = flat[0]
    assert (tau, gamma, radius, mode, cls) == (1.0, -1.0, 1.0, 0, "radial")
    assert lam < 0.0 and t_final > 0.0 and n_final > 0 and resid >= 0.0
    assert flat[2][4] == "" and flat[2][5] == "no-bound-state"
    rows2 = sweep(*args, controls=controls, n_max=1)
    assert sweep_csv_rows(rows2) == flat


def test_sweep_captures_pointwise_failures():
    rows = sweep([0.0], [-0.1], [0.5, 1.0], controls=SolveControls(rtol=1e-6), n_max=0)
    assert rows[0].report is None
    assert "stalled" in rows[0].error
    assert rows[1].report is not None
    flat = sweep_csv_rows(rows)
    assert flat[0][5] == "error"
    assert len(flat) == 2


def test_sweep_threaded_matches_serial():
    controls = SolveControls(rtol=1e-4, atol=1e-6)
    serial = sweep([0.0, 1.0], [-1.0], [1.0], controls=controls, n_max=1)
    threaded = sweep([0.0, 1.0], [-1.0], [1.0], controls=controls, n_max=1, workers=2)
    assert sweep_csv_rows(serial) == sweep_csv_rows(threaded)
