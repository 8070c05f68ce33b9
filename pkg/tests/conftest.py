import numpy as np
import pytest

from chernoff_forms import DiscreteModel, ExponentialModel, GaussianModel
from chernoff_forms import worked_example


@pytest.fixture
def q8():
    return worked_example.model()


@pytest.fixture
def std_normal():
    return GaussianModel(0.0, 1.0)


@pytest.fixture
def exp1():
    return ExponentialModel(1.0)


def random_pmf(rng, m_low=8, m_high=32, zero_atoms=False):
    """Random model with strictly increasing support and Dirichlet masses."""
    m = int(rng.integers(m_low, m_high + 1))
    support = np.cumsum(rng.uniform(0.1, 2.0, size=m)) + rng.uniform(-5, 5)
    prob = rng.dirichlet(np.ones(m))
    if zero_atoms:
        prob[rng.integers(0, m)] = 0.0
        prob /= prob.sum()
    return DiscreteModel(support, prob)


def random_case(rng):
    """A random pmf and an atom a with E X < a < max support."""
    while True:
        model = random_pmf(rng)
        ex = model.mean()
        cands = model.support[(model.support > ex) & (model.support < model.support[-1])]
        if cands.size:
            return model, float(rng.choice(cands))
