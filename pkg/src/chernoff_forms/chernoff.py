"""Chernoff bound: the tilt parameter theta-hat and the bound in log and plain form.

For a >= E X and a concave, non-decreasing v,

    log P(X >= a) <= min_theta  K(theta) - theta v(a),   K(theta) = log E exp(theta v(X)).

The minimum is found by solving the stationarity condition K'(theta) = v(a)
with a safeguarded Newton iteration; K is convex so K' is increasing and a
bracket [lo, hi] with K'(lo) < v(a) < K'(hi) always contains the root.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    BelowMeanError,
    DegenerateValueFunction,
    DivergentMGF,
    InfeasibleTarget,
    NotAnAtom,
    RatioUndefined,
    SolverError,
)
from .measures import (
    IDENTITY,
    DiscreteModel,
    Model,
    ValueFunction,
    mean_v,
    tail_prob,
    tilt_stats,
    validate_value_function,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200
MAX_EXPONENT_SPREAD = 700.0

ATTAINED = "attained"
AT_INFINITY = "infimum-at-infinity"
TRIVIAL_ZERO = "trivial-zero"
INFEASIBLE = "infeasible"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class TiltSolution:
    """Root of K'(theta) = target together with solver diagnostics.

    ``attained`` is one of ``"attained"``, ``"infimum-at-infinity"`` (theta
    runs off to +/- inf and only a limiting value exists) or
    ``"trivial-zero"`` (target equals E v(X), theta = 0 exactly).  Reports
    built for infeasible or degenerate inputs use ``"infeasible"`` and
    ``"degenerate"``.
    """

    theta_hat: float
    residual: float
    iterations: int
    attained: str
    target: float = math.nan
    log_normalizer: float = math.nan
    limit_log_bound: float | None = None

    @property
    def log_bound(self) -> float:
        """K(theta) - theta * target at the solution (or its limit)."""
        if self.limit_log_bound is not None:
            return self.limit_log_bound
        if self.attained == TRIVIAL_ZERO:
            return 0.0
        return self.log_normalizer - self.theta_hat * self.target


def _scaled_tol(tol: float, target: float) -> float:
    return tol * max(1.0, abs(target))


def solve_tilt(
    model: Model,
    v: ValueFunction,
    target: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> TiltSolution:
    """Solve K'(theta) = ``target`` for theta of either sign.

    This is the shared engine behind :func:`optimize_theta` (target = v(a),
    theta >= 0) and the maximum-likelihood estimate (target = sample mean of
    v, any sign).  When ``target`` sits at the top or bottom of the range of
    v the root is at +/- infinity; the returned solution is then flagged
    ``infimum-at-infinity`` and carries the limiting value of
    K(theta) - theta * target, which is log Q(v(X) = target).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    target = float(target)
    stats0 = tilt_stats(model, v, 0.0)
    if stats0.var <= 0.0:
        raise DegenerateValueFunction(f"v(X) = {stats0.mean!r} almost surely; there is nothing to tilt")
    vmin, vmax = model.value_range(v)
    if target > vmax or target < vmin:
        raise InfeasibleTarget(
            f"target {target!r} lies outside the range [{vmin!r}, {vmax!r}] of v on the support"
        )
    base_tol = _scaled_tol(tol, target)
    if abs(stats0.mean - target) <= base_tol:
        return TiltSolution(0.0, abs(stats0.mean - target), 0, TRIVIAL_ZERO, target, 0.0)
    sign = 1.0 if target > stats0.mean else -1.0
    if target == (vmax if sign > 0 else vmin):
        limit = math.log(_extreme_mass(model, v, sign))
        return TiltSolution(sign * math.inf, 0.0, 0, AT_INFINITY, target, math.nan, limit)

    dom_lo, dom_hi = model.theta_domain(v)
    boundary = dom_hi if sign > 0 else -dom_lo
    spread = vmax - vmin
    theta_cap = MAX_EXPONENT_SPREAD / spread if math.isfinite(spread) else math.inf

    def g(t: float):
        st = tilt_stats(model, v, sign * t)
        return sign * (st.mean - target), st

    # work in u = sign * theta >= 0 where g is increasing and g(0) < 0
    lo, hi = 0.0, 1.0
    g_lo, st_lo = sign * (stats0.mean - target), stats0
    iterations = 0
    if hi >= boundary:
        hi = boundary / 2
    g_hi, st_hi = g(hi)
    while g_hi < 0:
        iterations += 1
        if iterations > max_iter:
            raise SolverError(f"could not bracket the root of K'(theta) = {target!r} in {max_iter} steps")
        if hi >= theta_cap:
            limit = math.log(_extreme_mass(model, v, sign))
            log.debug("no root below theta_max = %g; treating as infimum at infinity", theta_cap)
            return TiltSolution(sign * math.inf, abs(g_hi), iterations, AT_INFINITY, target, math.nan, limit)
        lo, g_lo, st_lo = hi, g_hi, st_hi
        nxt = min(2.0 * hi, theta_cap) if math.isfinite(theta_cap) else 2.0 * hi
        if nxt >= boundary:
            nxt = 0.5 * (hi + boundary)
        hi = nxt
        g_hi, st_hi = g(hi)

    best_u, best_g, best_st = (hi, g_hi, st_hi) if abs(g_hi) < abs(g_lo) else (lo, g_lo, st_lo)
    u, gu, st = best_u, best_g, best_st
    while abs(gu) > base_tol:
        iterations += 1
        if iterations > max_iter:
            raise SolverError(
                f"no convergence after {max_iter} iterations (residual {abs(best_g)!r}, tolerance {base_tol!r})"
            )
        step_ok = st.var > 0
        if step_ok:
            cand = u - gu / st.var
            step_ok = lo < cand < hi
        if not step_ok:
            cand = 0.5 * (lo + hi)
        if cand <= lo or cand >= hi:
            # bracket has collapsed to adjacent floats; no further progress possible
            break
        u = cand
        gu, st = g(u)
        if gu < 0:
            lo = u
        elif gu > 0:
            hi = u
        if abs(gu) < abs(best_g):
            best_u, best_g, best_st = u, gu, st
    theta = sign * best_u
    log.debug("theta_hat = %r after %d iterations, residual %.3g", theta, iterations, abs(best_g))
    return TiltSolution(float(theta), float(abs(best_g)), iterations, ATTAINED, target, float(best_st.log_mgf))


def _extreme_mass(model: Model, v: ValueFunction, sign: float) -> float:
    return model.top_mass(v) if sign > 0 else model.bottom_mass(v)


def optimize_theta(
    model: Model,
    v: ValueFunction = IDENTITY,
    a: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> TiltSolution:
    """theta-hat minimizing K(theta) - theta v(a), restricted to a >= E X.

    Raises :class:`BelowMeanError` for a < E X, :class:`InfeasibleTarget`
    when v(a) exceeds v everywhere on the support and
    :class:`DegenerateValueFunction` when v(X) is constant.
    """
    a = float(a)
    validate_value_function(model, v)
    ex = model.mean()
    if a < ex - 1e-12 * max(1.0, abs(ex)):
        raise BelowMeanError(f"threshold a = {a!r} is below the mean E X = {ex!r} (the bound needs a >= E X)")
    target = float(v(a))
    if not math.isfinite(target):
        raise InfeasibleTarget(f"v(a) = {target!r} is not finite")
    ev = mean_v(model, v)
    if target < ev:
        # only reachable through rounding when a == E X (Jensen: E v(X) <= v(E X) <= v(a))
        target = ev
    sol = solve_tilt(model, v, target, tol, max_iter)
    return sol


def bound_log(
    model: Model,
    v: ValueFunction = IDENTITY,
    a: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> float:
    """C = K(theta-hat) - theta-hat v(a), an upper bound on log P(X >= a)."""
    return optimize_theta(model, v, a, tol, max_iter).log_bound


@dataclass
class BoundReport:
    """Every form of the bound at one threshold.

    ``bound`` is exp(``log_bound``).  ``kl_value`` is I(P-hat || Q) = -log_bound.
    ``product_form`` (discrete only) and ``ratio_form`` are None when they do
    not apply, e.g. when a is not an atom.
    """

    a: float
    v_of_a: float
    tilt: TiltSolution
    log_bound: float
    bound: float
    true_tail: float | None
    kl_value: float
    product_form: float | None = None
    ratio_form: float | None = None
    projection: Any = field(default=None, repr=False)

    def to_dict(self) -> dict:
        proj = self.projection
        if proj is not None:
            proj = proj.to_dict()
        return {
            "a": self.a,
            "v_of_a": self.v_of_a,
            "theta_hat": self.tilt.theta_hat,
            "residual": self.tilt.residual,
            "iterations": self.tilt.iterations,
            "attained": self.tilt.attained,
            "log_bound": self.log_bound,
            "bound": self.bound,
            "true_tail": self.true_tail,
            "kl": self.kl_value,
            "product_form": self.product_form,
            "ratio_form": self.ratio_form,
            "projection": proj,
        }


def bound(
    model: Model,
    v: ValueFunction = IDENTITY,
    a: float = 0.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    forms: bool = True,
) -> BoundReport:
    """Chernoff bound C^P = exp(C) on P(X >= a) with the true tail alongside.

    With ``forms=True`` the I-projection is computed as well and the KL,
    product and ratio forms are filled in wherever they are defined.
    Infeasible thresholds (v(a) above the range of v) give bound 0 and a
    constant v(X) gives the indicator bound; both issue a warning instead of
    raising.  A threshold below the mean still raises.
    """
    from . import projection as proj_mod

    a = float(a)
    v_of_a = float(v(a))
    true_tail = tail_prob(model, a)
    try:
        sol = optimize_theta(model, v, a, tol, max_iter)
    except InfeasibleTarget as exc:
        warnings.warn(str(exc), stacklevel=2)
        sol = TiltSolution(math.inf, 0.0, 0, INFEASIBLE, v_of_a, math.nan, -math.inf)
        return BoundReport(a, v_of_a, sol, -math.inf, 0.0, true_tail, math.inf)
    except DegenerateValueFunction as exc:
        warnings.warn(str(exc), stacklevel=2)
        c = mean_v(model, v)
        log_b = 0.0 if v_of_a <= c else -math.inf
        sol = TiltSolution(0.0, 0.0, 0, DEGENERATE, v_of_a, 0.0, log_b)
        return BoundReport(a, v_of_a, sol, log_b, math.exp(log_b), true_tail, -log_b)

    log_b = sol.log_bound
    report = BoundReport(a, v_of_a, sol, log_b, math.exp(log_b), true_tail, -log_b)
    if not forms:
        return report
    projection = proj_mod.project_from_solution(model, v, sol)
    report.projection = projection
    if isinstance(model, DiscreteModel):
        report.product_form = proj_mod.product_form_bound(projection, model)
    try:
        report.ratio_form = proj_mod.ratio_form_bound(model, projection, a)
    except (NotAnAtom, RatioUndefined, DivergentMGF):
        pass
    return report
