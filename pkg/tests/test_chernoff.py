import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from chernoff_forms import (
    IDENTITY,
    BelowMeanError,
    DegenerateValueFunction,
    DiscreteModel,
    GaussianModel,
    GridModel,
    InfeasibleTarget,
    ValueFunction,
    bound,
    bound_log,
    cgf,
    cgf_prime,
    optimize_theta,
    solve_tilt,
)
from chernoff_forms.worked_example import PUBLISHED_BOUNDS, PUBLISHED_PROJECTION_A4

from conftest import random_case, random_pmf


def brute_force_log_bound(model, a):
    """Bounded Brent minimization of the naive objective, independent of the Newton path."""
    x, q = model.support, model.prob

    def objective(t):
        return math.log(np.sum(q * np.exp(t * (x - a))))

    res = minimize_scalar(objective, bounds=(0.0, 60.0), method="bounded", options={"xatol": 1e-12})
    return res.x, res.fun


def test_theta_zero_at_mean(q8):
    sol = optimize_theta(q8, IDENTITY, 3.19)
    assert sol.theta_hat == 0.0
    assert sol.attained == "trivial-zero"
    assert bound(q8, IDENTITY, 3.19).bound == 1.0
    assert bound_log(q8, IDENTITY, 3.19) == 0.0


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.7])
def test_gaussian_theta_equals_a(std_normal, a):
    sol = optimize_theta(std_normal, IDENTITY, a)
    assert sol.theta_hat == pytest.approx(a, abs=1e-12)
    assert bound_log(std_normal, IDENTITY, a) == pytest.approx(-a * a / 2, rel=1e-12)


def test_gaussian_general_parameters():
    m = GaussianModel(1.0, 2.0)
    a = 4.0
    # theta = (a - mu) / sigma^2, log bound = -(a - mu)^2 / (2 sigma^2)
    assert optimize_theta(m, IDENTITY, a).theta_hat == pytest.approx(0.75, rel=1e-12)
    assert bound_log(m, IDENTITY, a) == pytest.approx(-9 / 8, rel=1e-12)


def test_exponential_theta(exp1):
    for a in (1.5, 2.0, 5.0, 30.0):
        assert optimize_theta(exp1, IDENTITY, a).theta_hat == pytest.approx(1 - 1 / a, rel=1e-12)
        assert bound(exp1, IDENTITY, a).bound == pytest.approx(a * math.exp(1 - a), rel=1e-12)


def test_exponential_report(exp1):
    rep = bound(exp1, IDENTITY, 2.0)
    assert rep.bound == pytest.approx(2 * math.exp(-1), rel=1e-12)
    assert rep.true_tail == pytest.approx(math.exp(-2), rel=1e-15)
    assert rep.kl_value == pytest.approx(1 - math.log(2), rel=1e-12)


@pytest.mark.parametrize("a", [4.0, 5.0, 6.0, 7.0])
def test_worked_example_bounds(q8, a):
    printed, tol, tail = PUBLISHED_BOUNDS[a]
    rep = bound(q8, IDENTITY, a)
    assert abs(rep.bound - printed) <= tol
    assert rep.true_tail == pytest.approx(tail, abs=1e-15)
    assert bound_log(q8, IDENTITY, a) == pytest.approx(math.log(printed), abs=1e-3 if a < 6 else 2e-2)


def test_worked_example_projection(q8):
    sol = optimize_theta(q8, IDENTITY, 4.0)
    p = q8.prob * np.exp(sol.theta_hat * q8.support - cgf(q8, IDENTITY, sol.theta_hat))
    np.testing.assert_allclose(p, PUBLISHED_PROJECTION_A4, atol=5e-4)
    assert cgf_prime(q8, IDENTITY, sol.theta_hat) == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("a", [3.5, 4.0, 5.0, 6.0, 7.0, 7.9])
def test_matches_brute_force_minimizer(q8, a):
    t_ref, f_ref = brute_force_log_bound(q8, a)
    sol = optimize_theta(q8, IDENTITY, a)
    assert sol.theta_hat == pytest.approx(t_ref, abs=1e-5)
    assert sol.log_bound == pytest.approx(f_ref, abs=1e-11)
    assert sol.log_bound <= f_ref + 1e-14


def test_below_mean_is_an_error(q8, std_normal):
    with pytest.raises(BelowMeanError):
        optimize_theta(q8, IDENTITY, 3.0)
    with pytest.raises(BelowMeanError):
        bound(std_normal, IDENTITY, -0.1)


def test_infeasible_target(q8):
    with pytest.raises(InfeasibleTarget):
        optimize_theta(q8, IDENTITY, 8.5)
    with pytest.warns(UserWarning):
        rep = bound(q8, IDENTITY, 8.5)
    assert rep.bound == 0.0
    assert rep.tilt.attained == "infeasible"
    assert rep.true_tail == 0.0


def test_top_of_support_is_infimum_at_infinity(q8):
    sol = optimize_theta(q8, IDENTITY, 8.0)
    assert sol.attained == "infimum-at-infinity"
    assert sol.theta_hat == math.inf
    assert sol.log_bound == pytest.approx(math.log(0.01), rel=1e-14)
    assert bound(q8, IDENTITY, 8.0).bound == pytest.approx(0.01, rel=1e-14)


def test_near_top_of_support_hits_theta_cap():
    m = DiscreteModel([0.0, 1.0], [0.5, 0.5])
    a = 1.0 - 1e-320
    sol = optimize_theta(m, IDENTITY, a)
    assert sol.attained in ("infimum-at-infinity", "attained")
    assert sol.log_bound == pytest.approx(math.log(0.5), abs=1e-12)


def test_degenerate_value_function():
    single = DiscreteModel([5.0], [1.0])
    with pytest.raises(DegenerateValueFunction):
        optimize_theta(single, IDENTITY, 5.0)
    with pytest.warns(UserWarning):
        assert bound(single, IDENTITY, 5.0).bound == 1.0
    flat = ValueFunction.table([0, 10], [2, 2])
    q = DiscreteModel([1.0, 2.0], [0.5, 0.5])
    with pytest.warns(UserWarning):
        assert bound(q, flat, 1.8).bound == 1.0


def test_log_value_function(exp1):
    v = ValueFunction.log()
    rep = bound(exp1, v, 2.0)
    assert rep.true_tail <= rep.bound
    assert cgf_prime(exp1, v, rep.tilt.theta_hat) == pytest.approx(math.log(2.0), abs=1e-12)
    # log bound is the minimum of theta -> K(theta) - theta log 2; probe nearby
    for dt in (-0.01, 0.01):
        t = rep.tilt.theta_hat + dt
        assert cgf(exp1, v, t) - t * math.log(2.0) >= rep.log_bound


def test_table_value_function_on_exponential(exp1):
    v = ValueFunction.table([0, 1, 3], [0, 1, 1.5])
    rep = bound(exp1, v, 1.5)
    assert rep.tilt.attained == "attained"
    assert rep.true_tail <= rep.bound
    top = bound(exp1, v, 5.0)
    assert top.tilt.attained == "infimum-at-infinity"
    # limit is P(v(X) = 1.5) = P(X >= 3)
    assert top.bound == pytest.approx(math.exp(-3.0), rel=1e-14)


def test_grid_model_bound_close_to_analytic():
    x = np.linspace(0, 60, 60001)
    d = np.exp(-x)
    g = GridModel(x, d / np.trapezoid(d, x))
    assert bound(g, IDENTITY, 2.0).bound == pytest.approx(2 * math.exp(-1), rel=1e-6)


def test_solve_tilt_negative_target(q8):
    sol = solve_tilt(q8, IDENTITY, 2.5)
    assert sol.theta_hat < 0
    assert cgf_prime(q8, IDENTITY, sol.theta_hat) == pytest.approx(2.5, abs=1e-12)
    low = solve_tilt(q8, IDENTITY, 1.0)
    assert low.theta_hat == -math.inf
    assert low.log_bound == pytest.approx(math.log(0.05))


def test_tolerance_and_iteration_arguments(q8):
    loose = optimize_theta(q8, IDENTITY, 4.0, tol=1e-3)
    assert loose.residual <= 1e-3 * 4
    with pytest.raises(ValueError):
        optimize_theta(q8, IDENTITY, 4.0, tol=0.0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_dominance_and_optimality(seed):
    rng = np.random.default_rng(seed)
    model, a = random_case(rng)
    rep = bound(model, IDENTITY, a, forms=False)
    assert rep.true_tail <= rep.bound + 1e-12
    assert rep.tilt.theta_hat >= 0
    assert 0 < rep.bound <= 1
    for t in rng.uniform(-2, 2 * rep.tilt.theta_hat + 1, size=10):
        assert cgf(model, IDENTITY, t) - t * a >= rep.log_bound - 1e-10


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_bound_non_increasing_in_a(seed):
    rng = np.random.default_rng(seed)
    model = random_pmf(rng)
    grid = np.linspace(model.mean(), model.support[-1], 25)[:-1]
    values = [bound(model, IDENTITY, a, forms=False).bound for a in grid]
    assert all(b <= a_ + 1e-14 for a_, b in zip(values, values[1:]))


def test_report_invariants(q8):
    rep = bound(q8, IDENTITY, 5.0)
    assert rep.bound == pytest.approx(math.exp(rep.log_bound), rel=1e-12)
    assert rep.kl_value == pytest.approx(-rep.log_bound, rel=1e-15)
    d = rep.to_dict()
    assert d["bound"] == rep.bound and d["projection"]["tilted"]["support"] == q8.support.tolist()


def test_no_warnings_on_regular_input(q8):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bound(q8, IDENTITY, 4.0)
