"""Exponential tilts, I-projections and the equivalent forms of the bound.

The I-projection of Q onto {P : E_P v(X) = v(a)} is the tilt of Q at
theta-hat, and its divergence from Q is exactly minus the log Chernoff bound.
Three further expressions of the bound follow from that:

* product form   prod_i (q_i / p_i)^{p_i}           (discrete)
* ratio form     q(a) / p(a)                          (mass or density at a)
* generalized    1 / (dP/dQ)(a)                       (Radon-Nikodym derivative at a)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .chernoff import (
    AT_INFINITY,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    TRIVIAL_ZERO,
    TiltSolution,
    optimize_theta,
)
from .errors import (
    GeneralizedProjectionOnly,
    InternalInvariantViolation,
    NotAnAtom,
    RatioUndefined,
    SupportMismatch,
)
from .measures import IDENTITY, DiscreteModel, Model, ValueFunction, tilt_stats


@dataclass(frozen=True)
class Projection:
    """A tilted law together with the quantities that define it.

    ``tilted`` is a :class:`DiscreteModel` for discrete inputs and an object
    with a ``pdf`` method for continuous ones.  ``target`` is the mean of
    v(X) under the tilted law (v(a) for an I-projection).
    """

    tilted: Any
    theta_hat: float
    log_normalizer: float
    kl: float
    target: float
    attained: str = "attained"

    def rn_derivative(self, v: ValueFunction, x):
        """dP/dQ at x, i.e. exp(theta v(x) - K(theta))."""
        with np.errstate(over="ignore", invalid="ignore"):
            out = np.exp(self.theta_hat * np.asarray(v(x), dtype=float) - self.log_normalizer)
        return out if np.ndim(out) else float(out)

    def to_dict(self) -> dict:
        return {
            "theta_hat": self.theta_hat,
            "log_normalizer": self.log_normalizer,
            "kl": self.kl,
            "target": self.target,
            "attained": self.attained,
            "tilted": None if self.tilted is None else self.tilted.to_dict(),
        }


def tilt(model: Model, v: ValueFunction, theta: float) -> Projection:
    """Q reweighted by exp(theta v(x)) and renormalized; no constraint imposed.

    The divergence of the tilt from Q is theta K'(theta) - K(theta).
    """
    theta = float(theta)
    st = tilt_stats(model, v, theta)
    if theta == 0.0:
        return Projection(model, 0.0, 0.0, 0.0, st.mean)
    kl = max(theta * st.mean - st.log_mgf, 0.0)
    return Projection(model.tilted(v, theta, st.log_mgf), theta, st.log_mgf, kl, st.mean)


def project_from_solution(model: Model, v: ValueFunction, sol: TiltSolution) -> Projection:
    """Build the I-projection for an already solved tilt parameter."""
    if sol.attained == TRIVIAL_ZERO:
        return Projection(model, 0.0, 0.0, 0.0, sol.target, sol.attained)
    if sol.attained == AT_INFINITY:
        # the projection is Q conditioned on the atoms where v is extreme
        tilted = None
        if isinstance(model, DiscreteModel):
            vals = np.full(len(model), np.nan)
            vals[model.positive] = model.values(v)
            keep = model.positive & (vals == sol.target)
            p = np.where(keep, model.prob, 0.0)
            tilted = DiscreteModel(model.support, p / math.fsum(p))
        return Projection(tilted, sol.theta_hat, math.nan, -sol.log_bound, sol.target, sol.attained)
    tilted = model.tilted(v, sol.theta_hat, sol.log_normalizer)
    # closed form: I(P||Q) = theta v(a) - K(theta) on the constraint set
    kl = max(sol.theta_hat * sol.target - sol.log_normalizer, 0.0)
    return Projection(tilted, sol.theta_hat, sol.log_normalizer, kl, sol.target, sol.attained)


def i_projection(
    model: Model,
    v: ValueFunction = IDENTITY,
    a: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> Projection:
    """The law closest to Q in I-divergence among those with E_P v(X) = v(a)."""
    return project_from_solution(model, v, optimize_theta(model, v, a, tol, max_iter))


def kl_divergence(p: DiscreteModel, q: DiscreteModel) -> float:
    """I(p || q) = sum p_i log(p_i / q_i), with 0 log 0 = 0 and log(b / 0) = +inf."""
    if not np.array_equal(p.support, q.support):
        raise SupportMismatch("kl_divergence needs both models on the same support")
    live = p.prob > 0
    if np.any(q.prob[live] == 0):
        return math.inf
    pp, qq = p.prob[live], q.prob[live]
    return math.fsum(pp * (np.log(pp) - np.log(qq)))


def product_form_bound(projection: Projection, model: DiscreteModel) -> float:
    """prod_i (q_i / p_i)^{p_i}, evaluated as exp(sum p_i log(q_i / p_i))."""
    p = projection.tilted
    if not isinstance(p, DiscreteModel) or not np.array_equal(p.support, model.support):
        raise SupportMismatch("the projection does not live on the model's support")
    live = p.prob > 0
    if projection.attained != AT_INFINITY and np.any(model.positive & ~live):
        raise InternalInvariantViolation("the tilt put zero mass on an atom that Q charges")
    pp, qq = p.prob[live], model.prob[live]
    return math.exp(math.fsum(pp * (np.log(qq) - np.log(pp))))


def ratio_form_bound(model: Model, projection: Projection, a: float) -> float:
    """q(a) / p(a): mass ratio at the atom a, or density ratio at the point a."""
    a = float(a)
    if isinstance(model, DiscreteModel):
        i = model.index_of(a)
        if i is None:
            raise NotAnAtom(f"a = {a!r} is not a support point of the model")
        q_a = float(model.prob[i])
        p_a = float(projection.tilted.prob[i])
    else:
        if projection.tilted is None:
            raise RatioUndefined("no tilted density exists when theta-hat is infinite")
        q_a = float(model.pdf(a))
        p_a = float(projection.tilted.pdf(a))
    if q_a == 0.0 or p_a == 0.0:
        raise RatioUndefined(f"q(a) = {q_a!r}, p(a) = {p_a!r}; the ratio needs both non-zero")
    return q_a / p_a


def generalized_projection_bound(
    model: Model,
    v: ValueFunction = IDENTITY,
    a: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """1 / (dP/dQ)(a) for the (generalized) I-projection P.

    Needs no density at a, so it also covers unbounded v.  If theta-hat is
    not attained, :class:`GeneralizedProjectionOnly` is raised with the
    limiting bound value attached.
    """
    sol = optimize_theta(model, v, a, tol, max_iter)
    if sol.attained == AT_INFINITY:
        raise GeneralizedProjectionOnly(
            "theta-hat is infinite; only the limit of the bound exists", math.exp(sol.log_bound)
        )
    proj = project_from_solution(model, v, sol)
    rn = proj.rn_derivative(v, a)
    if rn == 0.0:
        raise RatioUndefined("dP/dQ vanishes at a")
    return 1.0 / rn
