import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from chernoff_forms import (
    IDENTITY,
    DiscreteModel,
    DivergentMGF,
    EvaluationError,
    ExponentialModel,
    GaussianModel,
    GridModel,
    InvalidModel,
    InvalidValueFunction,
    ValueFunction,
    cgf,
    cgf_prime,
    cgf_second,
    closed_form,
    mean_v,
    tail_prob,
    validate_value_function,
)

from conftest import random_pmf


def naive_cgf(model, v, theta):
    x = model.support
    return math.log(np.sum(model.prob * np.exp(theta * np.asarray(v(x)))))


# -- DiscreteModel ------------------------------------------------------------


def test_discrete_model_validation():
    with pytest.raises(InvalidModel):
        DiscreteModel([1, 2, 2], [0.2, 0.3, 0.5])
    with pytest.raises(InvalidModel):
        DiscreteModel([2, 1], [0.5, 0.5])
    with pytest.raises(InvalidModel):
        DiscreteModel([1, 2], [0.5, 0.6])
    with pytest.raises(InvalidModel):
        DiscreteModel([1, 2], [-0.1, 1.1])
    with pytest.raises(InvalidModel):
        DiscreteModel([1, 2], [0.5])
    m = DiscreteModel([1, 2, 3], [0.5, 0.0, 0.5])
    assert m.zero_mass_atoms.tolist() == [1]


def test_discrete_model_is_immutable(q8):
    with pytest.raises(ValueError):
        q8.prob[0] = 0.3
    with pytest.raises(AttributeError):
        q8.prob = None


def test_dict_round_trip(q8):
    assert DiscreteModel.from_dict(q8.to_dict()) == q8


# -- mean_v --------------------------------------------------------------------


def test_mean_of_worked_example(q8):
    assert mean_v(q8, IDENTITY) == 3.19


def test_mean_single_atom():
    assert mean_v(DiscreteModel([5.0], [1.0]), IDENTITY) == 5.0


def test_mean_exponential(exp1):
    assert mean_v(exp1, IDENTITY) == 1.0


def test_mean_log_exponential_matches_quadrature(exp1):
    expected = integrate.quad(lambda x: math.log(x) * math.exp(-x), 0, np.inf)[0]
    assert mean_v(exp1, ValueFunction.log()) == pytest.approx(expected, rel=1e-10)
    assert mean_v(exp1, ValueFunction.log()) == pytest.approx(-np.euler_gamma, rel=1e-12)


def test_mean_v_rejects_non_finite_v():
    m = DiscreteModel([0.0, 1.0], [0.5, 0.5])
    with pytest.raises(EvaluationError):
        mean_v(m, ValueFunction.log())


# -- cgf -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "model, v",
    [
        (DiscreteModel([1, 2, 3], [0.2, 0.3, 0.5]), IDENTITY),
        (GaussianModel(1.0, 2.0), IDENTITY),
        (ExponentialModel(3.0), ValueFunction.log()),
        (ExponentialModel(1.0), ValueFunction.table([0, 1, 3], [0, 1, 1.5])),
    ],
)
def test_cgf_at_zero(model, v):
    assert cgf(model, v, 0.0) == 0.0
    assert cgf_prime(model, v, 0.0) == mean_v(model, v)


def test_cgf_gaussian(std_normal):
    assert cgf(std_normal, IDENTITY, 1.0) == 0.5
    for a in (-1.5, 0.3, 2.0):
        assert cgf_prime(std_normal, IDENTITY, a) == pytest.approx(a, abs=1e-15)


def test_cgf_worked_example_matches_direct_sum(q8):
    theta = 0.2768
    assert cgf(q8, IDENTITY, theta) == pytest.approx(naive_cgf(q8, IDENTITY, theta), rel=1e-12)


def test_cgf_exponential_divergence(exp1):
    with pytest.raises(DivergentMGF):
        cgf(exp1, IDENTITY, 1.0)
    with pytest.raises(DivergentMGF):
        cgf(exp1, IDENTITY, 2.5)
    assert cgf(exp1, IDENTITY, 0.5) == pytest.approx(math.log(2.0), rel=1e-15)
    with pytest.raises(DivergentMGF):
        cgf(exp1, ValueFunction.log(), -1.0)


def test_cgf_log_exponential_matches_quadrature():
    m = ExponentialModel(2.0)
    for theta in (-0.5, 0.7, 3.0):
        mgf = integrate.quad(lambda x: x**theta * 2.0 * math.exp(-2.0 * x), 0, np.inf, limit=200)[0]
        assert cgf(m, ValueFunction.log(), theta) == pytest.approx(math.log(mgf), rel=1e-9)


def test_cgf_table_on_exponential_matches_brute_quadrature(exp1):
    v = ValueFunction.table([0, 1, 3], [0, 1, 1.5])
    for theta in (0.7, -0.3, 4.0):
        z = integrate.quad(lambda x: math.exp(-x + theta * v(x)), 0, 80, points=[1, 3], epsrel=1e-13, limit=200)[0]
        m1 = integrate.quad(lambda x: v(x) * math.exp(-x + theta * v(x)), 0, 80, points=[1, 3], epsrel=1e-13,
                            limit=200)[0]
        assert cgf(exp1, v, theta) == pytest.approx(math.log(z), rel=1e-10)
        assert cgf_prime(exp1, v, theta) == pytest.approx(m1 / z, rel=1e-10)


def test_cgf_no_overflow_at_large_tilt():
    m = DiscreteModel([0.0, 1.0, 2.0], [0.3, 0.3, 0.4])
    theta = 700.0
    # log(0.4 e^{1400} + ...) = 1400 + log(0.4) + tiny
    assert cgf(m, IDENTITY, theta) == pytest.approx(1400 + math.log(0.4), rel=1e-15)
    assert cgf_prime(m, IDENTITY, theta) == pytest.approx(2.0, abs=1e-12)
    assert math.isfinite(cgf(m, IDENTITY, -700.0))


def test_zero_mass_atoms_drop_out():
    with_zero = DiscreteModel([1, 2, 3, 4], [0.25, 0.0, 0.5, 0.25])
    without = DiscreteModel([1, 3, 4], [0.25, 0.5, 0.25])
    for theta in (-1.0, 0.4, 2.0):
        assert cgf(with_zero, IDENTITY, theta) == pytest.approx(cgf(without, IDENTITY, theta), rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), t=st.floats(0.01, 0.99))
def test_cgf_is_convex(seed, t):
    rng = np.random.default_rng(seed)
    m = random_pmf(rng)
    th1, th2 = rng.uniform(-3, 3, size=2)
    lhs = cgf(m, IDENTITY, t * th1 + (1 - t) * th2)
    rhs = t * cgf(m, IDENTITY, th1) + (1 - t) * cgf(m, IDENTITY, th2)
    assert lhs <= rhs + 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_cgf_prime_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    m = random_pmf(rng)
    theta = float(rng.uniform(-2, 2))
    h = 1e-5
    fd = (cgf(m, IDENTITY, theta + h) - cgf(m, IDENTITY, theta - h)) / (2 * h)
    assert cgf_prime(m, IDENTITY, theta) == pytest.approx(fd, rel=1e-6, abs=1e-9)
    fd2 = (cgf_prime(m, IDENTITY, theta + h) - cgf_prime(m, IDENTITY, theta - h)) / (2 * h)
    assert cgf_second(m, IDENTITY, theta) == pytest.approx(fd2, rel=1e-5, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_log_domain_matches_naive_sum(seed):
    rng = np.random.default_rng(seed)
    m = random_pmf(rng)
    theta = float(rng.uniform(-5, 5))
    assert cgf(m, IDENTITY, theta) == pytest.approx(naive_cgf(m, IDENTITY, theta), rel=1e-12, abs=1e-13)


def test_cgf_prime_matches_finite_differences_continuous(exp1):
    for model, v, theta in [
        (exp1, ValueFunction.log(), 0.8),
        (exp1, ValueFunction.table([0, 1, 3], [0, 1, 1.5]), 1.3),
        (GaussianModel(2.0, 0.5), ValueFunction.affine(2.0, 1.0), -0.4),
    ]:
        h = 1e-5
        fd = (cgf(model, v, theta + h) - cgf(model, v, theta - h)) / (2 * h)
        assert cgf_prime(model, v, theta) == pytest.approx(fd, rel=1e-6)


# -- tail_prob -----------------------------------------------------------------


@pytest.mark.parametrize("a, expected", [(4, 0.35), (5, 0.2), (6, 0.1), (7, 0.03)])
def test_tail_worked_example(q8, a, expected):
    assert tail_prob(q8, a) == pytest.approx(expected, abs=1e-15)


def test_tail_extremes(q8, std_normal, exp1):
    assert tail_prob(q8, -1e300) == 1.0
    assert tail_prob(q8, 9.0) == 0.0
    assert tail_prob(exp1, -3.0) == 1.0
    assert tail_prob(std_normal, 0.0) == 0.5
    assert tail_prob(exp1, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-15)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_tail_non_increasing(seed):
    rng = np.random.default_rng(seed)
    m = random_pmf(rng)
    grid = np.sort(rng.uniform(m.support[0] - 1, m.support[-1] + 1, size=50))
    tails = [tail_prob(m, a) for a in grid]
    assert all(b <= a for a, b in zip(tails, tails[1:]))


# -- value functions -----------------------------------------------------------


def test_value_function_kinds():
    assert ValueFunction.identity()(3.0) == 3.0
    assert ValueFunction.log()(math.e) == pytest.approx(1.0)
    assert ValueFunction.affine(2.0, 1.0)(3.0) == 7.0
    tab = ValueFunction.table([0, 1, 3], [0, 1, 1.5])
    assert tab(0.5) == 0.5
    assert tab(2.0) == 1.25
    assert tab(-4.0) == 0.0
    assert tab(9.0) == 1.5


def test_value_function_rejects_bad_tables():
    with pytest.raises(InvalidValueFunction):
        ValueFunction.table([0, 0], [1, 2])
    with pytest.raises(InvalidValueFunction):
        ValueFunction.table([0], [1])
    with pytest.raises(InvalidValueFunction):
        ValueFunction.affine(-1.0)
    with pytest.raises(InvalidValueFunction):
        ValueFunction("cubic")


def test_validate_value_function(q8, std_normal, exp1):
    validate_value_function(q8, IDENTITY)
    validate_value_function(q8, ValueFunction.log())
    validate_value_function(exp1, ValueFunction.log())
    validate_value_function(exp1, ValueFunction.table([0, 1, 3], [0, 1, 1.5]))
    # decreasing
    with pytest.raises(InvalidValueFunction):
        validate_value_function(q8, ValueFunction.table([1, 8], [5, 1]))
    # convex kink
    with pytest.raises(InvalidValueFunction):
        validate_value_function(q8, ValueFunction.table([1, 4, 8], [0, 1, 5]))
    # clamping below the first knot breaks concavity on an unbounded support
    with pytest.raises(InvalidValueFunction):
        validate_value_function(std_normal, ValueFunction.table([-1, 0, 1], [-2, 0, 1]))
    with pytest.raises(InvalidValueFunction):
        validate_value_function(std_normal, ValueFunction.log())
    with pytest.raises(InvalidValueFunction):
        validate_value_function(DiscreteModel([-1, 2], [0.5, 0.5]), ValueFunction.log())


# -- continuous models ---------------------------------------------------------


def test_closed_form_factory():
    assert closed_form("gaussian", mu=1, sigma=2) == GaussianModel(1.0, 2.0)
    assert closed_form("exponential", rate=3) == ExponentialModel(3.0)
    with pytest.raises(InvalidModel):
        closed_form("cauchy")
    with pytest.raises(InvalidModel):
        closed_form("gaussian", sigma=-1)


def test_grid_model_validation():
    x = np.linspace(0, 1, 11)
    GridModel(x, np.ones(11))
    with pytest.raises(InvalidModel):
        GridModel(x, 2 * np.ones(11))
    with pytest.raises(InvalidModel):
        GridModel(x, -np.ones(11))
    with pytest.raises(InvalidModel):
        GridModel(x[::-1], np.ones(11))


def exp_grid(rate=1.0, upper=60.0, n=60001):
    x = np.linspace(0.0, upper, n)
    d = rate * np.exp(-rate * x)
    d = d / np.trapezoid(d, x)
    return GridModel(x, d)


def test_grid_cgf_is_trapezoid_sum():
    g = exp_grid(n=2001)
    theta = 0.4
    expected = math.log(np.trapezoid(g.density * np.exp(theta * g.nodes), g.nodes))
    assert cgf(g, IDENTITY, theta) == pytest.approx(expected, rel=1e-12)


def test_grid_approximates_closed_form(exp1):
    g = exp_grid()
    assert g.mean() == pytest.approx(1.0, rel=1e-6)
    assert cgf(g, IDENTITY, 0.5) == pytest.approx(math.log(2.0), rel=1e-6)
    assert tail_prob(g, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-6)
    assert tail_prob(g, 2.00037) == pytest.approx(math.exp(-2.00037), rel=1e-6)
