import numpy as np
import pytest

from itm.integrator import (IntegrationStatus, OdeSystem, Tolerances,
                            integrate, rk4_fixed)


def _system(fn, dim=1):
    return OdeSystem(dim, fn)


def _const_rhs(t, y, p):
    return np.zeros(1)


def _exp_rhs(t, y, p):
    return y.copy()


def _quad_rhs(t, y, p):
    return y * y


TOL = Tolerances()


def test_constant_solution_is_exact():
    out = integrate(_system(_const_rhs), [1.0], (0.0, 10.0), TOL)
    assert out.status is IntegrationStatus.COMPLETED
    assert out.final_t == 10.0
    assert out.final_state[0] == 1.0


def test_exponential_growth_matches_closed_form():
    out = integrate(_system(_exp_rhs), [1.0], (0.0, 1.0), TOL)
    assert out.status is IntegrationStatus.COMPLETED
    assert abs(out.final_state[0] - np.e) < 1e-5


def test_quadratic_blowup_detected_before_singularity():
    out = integrate(_system(_quad_rhs), [1.0], (0.0, 2.0), TOL)
    assert out.status is IntegrationStatus.BLOWUP
    assert out.final_t < 1.0 + 1e-3
    assert np.all(np.isfinite(out.final_state))
    assert np.any(np.abs(out.final_state) > TOL.blowup_cap)


def test_invalid_interval_and_dimension_raise():
    with pytest.raises(ValueError):
        integrate(_system(_exp_rhs), [1.0], (1.0, 0.0), TOL)
    with pytest.raises(ValueError):
        integrate(_system(_exp_rhs), [1.0, 2.0], (0.0, 1.0), TOL)


def test_nan_rhs_reports_step_underflow_not_exception():
    def bad(t, y, p):
        return np.full(1, np.nan)

    out = integrate(_system(bad), [1.0], (0.0, 1.0), TOL)
    assert out.status is IntegrationStatus.STEP_UNDERFLOW
    assert np.all(np.isfinite(out.final_state))


def test_max_steps_exceeded_status():
    out = integrate(_system(_exp_rhs), [1.0], (0.0, 1.0),
                    Tolerances(rel_tol=1e-12, abs_tol=1e-12, max_steps=3))
    assert out.status is IntegrationStatus.MAX_STEPS_EXCEEDED


def test_fixed_step_convergence_order_at_least_four():
    sys_ = _system(_exp_rhs)
    errors = []
    for n in (20, 40, 80):
        y = rk4_fixed(sys_, [1.0], (0.0, 1.0), n)
        errors.append(abs(y[0] - np.e))
    for coarse, fine in zip(errors, errors[1:]):
        assert coarse / fine >= 2 ** 4 * 0.9


def test_tolerance_monotonicity_on_exponential():
    prev_err = None
    for k in (4, 5, 6, 7, 8):
        tol = Tolerances(rel_tol=10.0 ** -k, abs_tol=10.0 ** -k)
        out = integrate(_system(_exp_rhs), [1.0], (0.0, 1.0), tol)
        err = abs(out.final_state[0] - np.e)
        if prev_err is not None:
            assert err <= prev_err * 1.5
        prev_err = err


def test_determinism_bit_identical():
    a = integrate(_system(_exp_rhs), [1.0], (0.0, 1.0), TOL)
    b = integrate(_system(_exp_rhs), [1.0], (0.0, 1.0), TOL)
    assert a.final_state[0] == b.final_state[0]
    assert a.steps_taken == b.steps_taken


def test_dense_samples_strictly_increasing():
    out = integrate(_system(_exp_rhs), [1.0], (0.0, 1.0), TOL,
                    sampling="dense")
    ts = [t for t, _ in out.samples]
    assert ts[0] == 0.0
    assert ts[-1] == out.final_t
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_backend_flag_forces_numpy(monkeypatch):
    from itm.problems import sakiadis
    from itm.groups import starred_initial_state

    p = sakiadis(-1)
    system = p.starred_rhs(2.5)
    y0 = starred_initial_state(p.boundary, p.group, 2.5, -1)
    fast = integrate(system, y0, (0.0, 10.0), TOL)
    monkeypatch.setenv("ITM_BACKEND", "numpy")
    slow = integrate(system, y0, (0.0, 10.0), TOL)
    assert np.allclose(fast.final_state, slow.final_state, atol=1e-12)
    assert fast.status is slow.status


def test_unknown_backend_value_rejected(monkeypatch):
    monkeypatch.setenv("ITM_BACKEND", "cuda")
    with pytest.raises(ValueError):
        integrate(_system(_exp_rhs), [1.0], (0.0, 1.0), TOL)


def test_tolerances_validation():
    with pytest.raises(ValueError):
        Tolerances(rel_tol=0.0)
    with pytest.raises(ValueError):
        Tolerances(blowup_cap=0.5)
    with pytest.raises(ValueError):
        Tolerances(max_steps=0)
