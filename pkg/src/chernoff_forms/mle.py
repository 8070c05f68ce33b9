"""Maximum likelihood in the exponential family generated by tilting Q.

The family is p_i(theta) = q_i exp(theta v(x_i) - K(theta)).  For a sample
with counts n_i the likelihood equation is K'(theta) = mean of v over the
sample, the same equation that defines the Chernoff tilt, so the ML
estimate and theta-hat coincide when the sample mean equals v(a).  Because
of that,

    l(theta_ML) / n = sum (n_i / n) log q_i - C,

with C the log Chernoff bound at the sample's own mean of v.  As n grows and
n_i / n approaches the I-projection p-hat, l(theta_ML) / n approaches
sum p_i log p_i = -H(p-hat).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chernoff import AT_INFINITY, DEFAULT_MAX_ITER, DEFAULT_TOL, TiltSolution, solve_tilt
from .errors import ImpossibleSample, MLBoundary, SupportMismatch
from .measures import IDENTITY, DiscreteModel, ValueFunction, cgf
from .projection import i_projection

SAMPLER_ALGORITHM = "numpy.random.PCG64 + inverse-CDF (searchsorted on cumulative masses)"


@dataclass(frozen=True)
class Sample:
    """Occurrence counts n_i for each support atom of a discrete model."""

    counts: tuple

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c != float(orig) for c, orig in zip(counts, self.counts)):
            raise ValueError("counts must be integers")
        if any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        if sum(counts) < 1:
            raise ValueError("a sample needs at least one observation")
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.n

    @classmethod
    def from_dict(cls, data: dict) -> "Sample":
        return cls(tuple(data["counts"]))

    def to_dict(self) -> dict:
        return {"counts": list(self.counts)}


def draw_sample(prob: Sequence[float], n: int, rng: np.random.Generator) -> Sample:
    """Multinomial(n, prob) by inverse-CDF lookup of n uniforms from ``rng``."""
    prob = np.asarray(prob, dtype=float)
    cdf = np.cumsum(prob)
    cdf[-1] = 1.0
    u = rng.random(int(n))
    idx = np.searchsorted(cdf, u, side="right")
    return Sample(tuple(np.bincount(idx, minlength=prob.size)[: prob.size]))


def _check(model: DiscreteModel, sample: Sample) -> np.ndarray:
    counts = np.asarray(sample.counts)
    if counts.size != len(model):
        raise SupportMismatch(f"sample has {counts.size} counts but the model has {len(model)} atoms")
    bad = np.flatnonzero((counts > 0) & (model.prob == 0))
    if bad.size:
        raise ImpossibleSample(f"sample hits zero-probability atoms at x = {model.support[bad].tolist()}")
    return counts


def sample_mean_v(model: DiscreteModel, v: ValueFunction, sample: Sample) -> float:
    """(1/n) sum n_i v(x_i), correctly rounded."""
    counts = _check(model, sample)
    live = counts > 0
    vals = np.asarray(v(model.support[live]), dtype=float)
    total = sum((Fraction(int(c)) * Fraction(float(x)) for c, x in zip(counts[live], vals)), Fraction(0))
    return float(total / sample.n)


def _base_loglik(model: DiscreteModel, counts: np.ndarray) -> float:
    live = counts > 0
    return math.fsum(counts[live] * np.log(model.prob[live]))


def log_likelihood(model: DiscreteModel, v: ValueFunction, theta: float, sample: Sample) -> float:
    """l(theta) = sum n_i (log q_i + theta v(x_i)) - n K(theta)."""
    counts = _check(model, sample)
    live = counts > 0
    vals = np.asarray(v(model.support[live]), dtype=float)
    theta = float(theta)
    tilt_part = math.fsum(counts[live] * vals) * theta if theta else 0.0
    return _base_loglik(model, counts) + tilt_part - sample.n * cgf(model, v, theta)


def ml_estimate(
    model: DiscreteModel,
    v: ValueFunction,
    sample: Sample,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> TiltSolution:
    """Root of the likelihood equation K'(theta) = sample mean of v.

    Negative estimates are fine (sample mean below E_Q v(X)).  A sample mean
    at the smallest or largest value of v has no finite maximizer and raises
    :class:`MLBoundary`.
    """
    vbar = sample_mean_v(model, v, sample)
    vmin, vmax = model.value_range(v)
    if not vmin < vbar < vmax:
        raise MLBoundary(f"sample mean of v = {vbar!r} is not inside ({vmin!r}, {vmax!r}); the estimate diverges")
    return solve_tilt(model, v, vbar, tol, max_iter)


def max_log_likelihood(
    model: DiscreteModel,
    v: ValueFunction,
    sample: Sample,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[TiltSolution, float]:
    """The ML solution and sup_theta l(theta).

    At the boundary the supremum is approached as theta runs to +/- inf and
    equals sum n_i log q_i - n log Q(v(X) = mean of v); that value is
    returned with an ``infimum-at-infinity`` solution rather than raising.
    """
    counts = _check(model, sample)
    vbar = sample_mean_v(model, v, sample)
    sol = solve_tilt(model, v, vbar, tol, max_iter)
    if sol.attained == AT_INFINITY:
        return sol, _base_loglik(model, counts) - sample.n * sol.log_bound
    return sol, log_likelihood(model, v, sol.theta_hat, sample)


def chernoff_from_likelihood(model: DiscreteModel, sample: Sample, log_l_max: float) -> float:
    """n-th root of prod q_i^{n_i} / L_max, from the maximized log-likelihood.

    Equals the Chernoff bound evaluated at the sample mean of v, for every n.
    """
    counts = _check(model, sample)
    return math.exp((_base_loglik(model, counts) - log_l_max) / sample.n)


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    loglik_over_n: float
    minus_entropy_target: float
    deviation: float
    empirical_max_dev: float
    plugin_target: float
    plugin_deviation: float
    theta_ml: float

    CSV_COLUMNS = ("n", "loglik_over_n", "minus_entropy_target", "deviation", "empirical_max_dev")


def asymptotic_experiment(
    model: DiscreteModel,
    v: ValueFunction = IDENTITY,
    a: float = 0.0,
    n_list: Sequence[int] = (100, 10_000, 1_000_000),
    seed: int = 42,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> list[ExperimentRow]:
    """Per-observation max log-likelihood against -H(p-hat) for growing samples.

    For each n, draws a multinomial sample from the I-projection p-hat for
    threshold ``a`` and records l(theta_ML) / n, its distance to
    sum p_i log p_i and to sum p_i log q_i - C, and max_i |n_i / n - p_i|.
    All draws come from one PCG64 stream seeded with ``seed``, consumed in
    list order.
    """
    ns = [int(n) for n in n_list]
    if any(n < 1 for n in ns):
        raise ValueError("sample sizes must be positive")
    if any(b <= a_ for a_, b in zip(ns, ns[1:])):
        raise ValueError("n_list must be strictly increasing")
    proj = i_projection(model, v, a, tol, max_iter)
    p_hat = proj.tilted.prob
    live = p_hat > 0
    minus_h = math.fsum(p_hat[live] * np.log(p_hat[live]))
    # sum p_i log q_i - C with C = -kl
    plugin = math.fsum(p_hat[live] * np.log(model.prob[live])) + proj.kl
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    for n in ns:
        sample = draw_sample(p_hat, n, rng)
        sol, loglik = max_log_likelihood(model, v, sample, tol, max_iter)
        per_obs = loglik / n
        rows.append(
            ExperimentRow(
                n=n,
                loglik_over_n=per_obs,
                minus_entropy_target=minus_h,
                deviation=abs(per_obs - minus_h),
                empirical_max_dev=float(np.max(np.abs(sample.frequencies - p_hat))),
                plugin_target=plugin,
                plugin_deviation=abs(per_obs - plugin),
                theta_ml=sol.theta_hat,
            )
        )
    return rows
