"""Probability models, value functions and log-domain moment evaluation.

Every model exposes the cumulant generating function of ``v(X)``,

    K(theta) = log E_Q exp(theta * v(X)),

together with its first two derivatives (the mean and variance of ``v(X)``
under the tilted law).  Sums and integrals are shifted by their largest
exponent before exponentiating, so ``|theta * v|`` in the hundreds is fine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate, special

from .errors import (
    DivergentMGF,
    EvaluationError,
    InvalidModel,
    InvalidValueFunction,
)

PROB_SUM_TOL = 1e-12
GRID_MASS_TOL = 1e-6
CONCAVITY_TOL = 1e-12

_VALUE_KINDS = ("identity", "log", "affine", "table")


class TiltStats(NamedTuple):
    """K(theta), K'(theta) and K''(theta) at one theta."""

    log_mgf: float
    mean: float
    var: float


def _exact_sum(terms) -> float:
    # correctly rounded sum of exact products of the float inputs
    return float(sum((Fraction(float(t[0])) * Fraction(float(t[1])) for t in terms), Fraction(0)))


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# Value functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValueFunction:
    """A concave, non-decreasing transform v applied to X before tilting.

    Build one with :meth:`identity`, :meth:`log`, :meth:`affine` or
    :meth:`table`.  Tables interpolate linearly between knots and clamp
    outside them.
    """

    kind: str = "identity"
    slope: float = 1.0
    intercept: float = 0.0
    knots_x: tuple = ()
    knots_v: tuple = ()

    def __post_init__(self):
        if self.kind not in _VALUE_KINDS:
            raise InvalidValueFunction(f"unknown value function kind {self.kind!r}")
        if self.kind == "affine" and not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise InvalidValueFunction("affine coefficients must be finite")
        if self.kind == "affine" and self.slope < 0:
            raise InvalidValueFunction("affine slope must be non-negative (v must be non-decreasing)")
        if self.kind == "table":
            xs, vs = np.asarray(self.knots_x, float), np.asarray(self.knots_v, float)
            if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 2:
                raise InvalidValueFunction("a table needs at least two (x, v) knots of equal length")
            if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
                raise InvalidValueFunction("table knots must be finite")
            if np.any(np.diff(xs) <= 0):
                raise InvalidValueFunction("table knots must be strictly increasing in x")

    @classmethod
    def identity(cls) -> "ValueFunction":
        return cls("identity")

    @classmethod
    def log(cls) -> "ValueFunction":
        return cls("log")

    @classmethod
    def affine(cls, slope: float, intercept: float = 0.0) -> "ValueFunction":
        return cls("affine", slope=float(slope), intercept=float(intercept))

    @classmethod
    def table(cls, xs: Sequence[float], vs: Sequence[float]) -> "ValueFunction":
        return cls("table", knots_x=tuple(float(x) for x in xs), knots_v=tuple(float(v) for v in vs))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "identity":
            out = x.copy()
        elif self.kind == "affine":
            out = self.slope * x + self.intercept
        elif self.kind == "log":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.log(x)
        else:
            out = np.interp(x, self.knots_x, self.knots_v)
        return out if out.ndim else float(out)

    def range_on(self, lower: float, upper: float) -> tuple[float, float]:
        """Infimum and supremum of v over the interval [lower, upper]."""
        return self._limit(lower), self._limit(upper)

    def _limit(self, x: float) -> float:
        if math.isinf(x):
            if self.kind == "table":
                return self.knots_v[0] if x < 0 else self.knots_v[-1]
            if self.kind == "affine" and self.slope == 0:
                return self.intercept
            if self.kind == "log" and x < 0:
                return math.nan
            return x
        with np.errstate(divide="ignore", invalid="ignore"):
            return float(self(x))

    def describe(self) -> str:
        if self.kind == "affine":
            return f"affine({self.slope!r}, {self.intercept!r})"
        if self.kind == "table":
            return f"table({len(self.knots_x)} knots)"
        return self.kind


IDENTITY = ValueFunction.identity()


# ---------------------------------------------------------------------------
# Discrete models
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DiscreteModel:
    """Finite-support pmf: strictly increasing ``support`` with masses ``prob``.

    Zero-mass atoms are allowed (see :attr:`zero_mass_atoms`); they simply
    drop out of every expectation.
    """

    support: np.ndarray
    prob: np.ndarray

    def __post_init__(self):
        support = _readonly(self.support)
        prob = _readonly(self.prob)
        if support.ndim != 1 or support.size == 0 or support.shape != prob.shape:
            raise InvalidModel("support and prob must be non-empty 1-d sequences of equal length")
        if not np.all(np.isfinite(support)):
            raise InvalidModel("support points must be finite")
        if np.any(np.diff(support) <= 0):
            raise InvalidModel("support must be strictly increasing with no duplicates")
        if not np.all(np.isfinite(prob)) or np.any(prob < 0):
            raise InvalidModel("probabilities must be finite and non-negative")
        total = math.fsum(prob)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise InvalidModel(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "prob", prob)

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteModel":
        try:
            return cls(data["support"], data["prob"])
        except KeyError as exc:
            raise InvalidModel(f"discrete model is missing field {exc}") from None

    def to_dict(self) -> dict:
        return {"support": self.support.tolist(), "prob": self.prob.tolist()}

    def __eq__(self, other):
        if not isinstance(other, DiscreteModel):
            return NotImplemented
        return np.array_equal(self.support, other.support) and np.array_equal(self.prob, other.prob)

    __hash__ = None

    def __len__(self) -> int:
        return self.support.size

    @property
    def zero_mass_atoms(self) -> np.ndarray:
        """Indices of atoms with q_i = 0; the ratio form is undefined there."""
        return np.flatnonzero(self.prob == 0)

    @property
    def positive(self) -> np.ndarray:
        return self.prob > 0

    @property
    def lower(self) -> float:
        return float(self.support[self.positive][0])

    @property
    def upper(self) -> float:
        return float(self.support[self.positive][-1])

    def mean(self) -> float:
        return _exact_sum(zip(self.support, self.prob))

    def tail(self, a: float) -> float:
        keep = self.support >= a
        return _exact_sum(zip(np.ones(int(keep.sum())), self.prob[keep]))

    def index_of(self, x: float) -> int | None:
        """Position of ``x`` in the support under exact float equality."""
        i = int(np.searchsorted(self.support, x))
        if i < self.support.size and self.support[i] == x:
            return i
        return None

    def values(self, v: ValueFunction) -> np.ndarray:
        """v at the positive-mass atoms; raises if any of those is not finite."""
        vals = np.asarray(v(self.support[self.positive]), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise EvaluationError(f"v = {v.describe()} is not finite on a positive-mass atom")
        return vals

    def check_points(self) -> np.ndarray:
        return self.support

    def value_range(self, v: ValueFunction) -> tuple[float, float]:
        vals = self.values(v)
        return float(vals.min()), float(vals.max())

    def top_mass(self, v: ValueFunction) -> float:
        """Q(v(X) = max v), the limit of the bound as theta grows without bound."""
        vals = self.values(v)
        q = self.prob[self.positive]
        return math.fsum(q[vals == vals.max()])

    def bottom_mass(self, v: ValueFunction) -> float:
        """Q(v(X) = min v), the limit as theta goes to minus infinity."""
        vals = self.values(v)
        q = self.prob[self.positive]
        return math.fsum(q[vals == vals.min()])

    def theta_domain(self, v: ValueFunction) -> tuple[float, float]:
        return -math.inf, math.inf

    def tilt_stats(self, v: ValueFunction, theta: float) -> TiltStats:
        return _weighted_stats(np.log(self.prob[self.positive]), self.values(v), theta)

    def tilted(self, v: ValueFunction, theta: float, log_normalizer: float) -> "DiscreteModel":
        with np.errstate(divide="ignore"):
            logq = np.log(self.prob)
        vals = np.zeros_like(logq)
        vals[self.positive] = self.values(v)
        p = np.where(self.positive, np.exp(logq + theta * vals - log_normalizer), 0.0)
        # absorb the last ulp of normalization error so the result validates
        p = p / math.fsum(p)
        return DiscreteModel(self.support, p)


def _weighted_stats(logw: np.ndarray, vals: np.ndarray, theta: float) -> TiltStats:
    """Tilt statistics for the finite measure sum_j exp(logw_j) delta_{vals_j}."""
    s = logw + theta * vals
    shift = np.max(s)
    if not math.isfinite(shift):
        raise EvaluationError("the tilted measure carries no finite mass")
    w = np.exp(s - shift)
    z = math.fsum(w)
    # centre on the heaviest atom so the mean keeps relative accuracy
    centre = float(vals[np.argmax(s)])
    mean = centre + math.fsum(w * (vals - centre)) / z
    var = math.fsum(w * (vals - mean) ** 2) / z
    return TiltStats(float(shift) + math.log(z), mean, var)


# ---------------------------------------------------------------------------
# Continuous models
# ---------------------------------------------------------------------------


class ContinuousModel:
    """A law on the real line with a density.

    Subclasses supply ``pdf``, ``mean``, ``tail`` and, where the family
    allows, an exact CGF through ``_exact_stats``.  Other value
    functions fall back to piecewise quadrature, which only converges for
    bounded v (tables).
    """

    lower: float = -math.inf
    upper: float = math.inf
    family: str = "continuous"

    def pdf(self, x):
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def tail(self, a: float) -> float:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params()}

    def check_points(self) -> np.ndarray:
        raise NotImplementedError

    def value_range(self, v: ValueFunction) -> tuple[float, float]:
        return v.range_on(self.lower, self.upper)

    def theta_domain(self, v: ValueFunction) -> tuple[float, float]:
        return -math.inf, math.inf

    def _exact_stats(self, v: ValueFunction, theta: float) -> TiltStats | None:
        return None

    def tilt_stats(self, v: ValueFunction, theta: float) -> TiltStats:
        lo, hi = self.theta_domain(v)
        if not lo < theta < hi:
            raise DivergentMGF(
                f"E exp(theta v(X)) diverges for theta = {theta!r} ({self.family}, v = {v.describe()}); "
                f"finite only on ({lo!r}, {hi!r})"
            )
        stats = self._exact_stats(v, theta)
        if stats is None:
            stats = self._quadrature_stats(v, theta)
        return stats

    def _quadrature_stats(self, v: ValueFunction, theta: float) -> TiltStats:
        if v.kind != "table":
            raise DivergentMGF(f"no CGF available for {self.family} with v = {v.describe()}")
        vmin, vmax = self.value_range(v)
        shift = theta * (vmax if theta >= 0 else vmin)
        first, last = v.knots_x[0], v.knots_x[-1]
        inner = [x for x in v.knots_x if self.lower < x < self.upper]
        edges = [self.lower, *inner, self.upper]
        m = np.zeros(3)
        for left, right in zip(edges[:-1], edges[1:]):
            if right <= first or left >= last:
                # v is clamped to a constant here; the piece integrates exactly
                value = v.knots_v[0] if right <= first else v.knots_v[-1]
                mass = self.tail(left) - self.tail(right)
                m += mass * math.exp(theta * value - shift) * np.array([1.0, value, value * value])
                continue
            for k in range(3):
                def integrand(x, k=k):
                    vx = float(v(x))
                    return self.pdf(x) * math.exp(theta * vx - shift) * vx**k

                m[k] += integrate.quad(integrand, left, right, epsabs=0, epsrel=1e-13, limit=200)[0]
        mean = float(m[1] / m[0])
        return TiltStats(shift + math.log(m[0]), mean, max(float(m[2] / m[0]) - mean * mean, 0.0))

    def top_mass(self, v: ValueFunction) -> float:
        _, vmax = self.value_range(v)
        hits = np.flatnonzero(np.asarray(v.knots_v) == vmax) if v.kind == "table" else []
        if not len(hits):
            return 0.0
        return self.tail(v.knots_x[hits[0]])

    def bottom_mass(self, v: ValueFunction) -> float:
        vmin, _ = self.value_range(v)
        hits = np.flatnonzero(np.asarray(v.knots_v) == vmin) if v.kind == "table" else []
        if not len(hits):
            return 0.0
        return 1.0 - self.tail(v.knots_x[hits[-1]])

    def tilted(self, v: ValueFunction, theta: float, log_normalizer: float):
        return TiltedDensity(self, v, theta, log_normalizer)


@dataclass(frozen=True)
class TiltedDensity:
    """x -> q(x) exp(theta v(x) - K(theta)) for a base continuous model."""

    base: ContinuousModel
    v: ValueFunction
    theta: float
    log_normalizer: float

    family = "tilted"

    def pdf(self, x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            q = np.asarray(self.base.pdf(x), dtype=float)
            vx = np.asarray(self.v(x), dtype=float)
            out = np.where(q > 0, q * np.exp(self.theta * vx - self.log_normalizer), 0.0)
        return out if out.ndim else float(out)

    def to_dict(self) -> dict:
        return {
            "family": "tilted",
            "base": self.base.to_dict(),
            "v": self.v.describe(),
            "theta": self.theta,
            "log_normalizer": self.log_normalizer,
        }


@dataclass(frozen=True)
class GaussianModel(ContinuousModel):
    """Normal law with mean ``mu`` and standard deviation ``sigma``."""

    mu: float = 0.0
    sigma: float = 1.0

    family = "gaussian"

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma) and self.sigma > 0):
            raise InvalidModel("gaussian needs finite mu and sigma > 0")

    def params(self) -> dict:
        return {"mu": self.mu, "sigma": self.sigma}

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        out = np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2 * math.pi))
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return self.mu

    def tail(self, a: float) -> float:
        return float(special.ndtr((self.mu - a) / self.sigma))

    def check_points(self) -> np.ndarray:
        return self.mu + self.sigma * np.linspace(-8.0, 8.0, 161)

    def _exact_stats(self, v, theta):
        if v.kind not in ("identity", "affine"):
            return None
        slope, icpt = (1.0, 0.0) if v.kind == "identity" else (v.slope, v.intercept)
        s2 = (slope * self.sigma) ** 2
        return TiltStats(
            theta * (icpt + slope * self.mu) + 0.5 * s2 * theta * theta,
            icpt + slope * self.mu + s2 * theta,
            s2,
        )

    def tilted(self, v, theta, log_normalizer):
        if v.kind == "identity":
            return GaussianModel(self.mu + self.sigma**2 * theta, self.sigma)
        if v.kind == "affine":
            return GaussianModel(self.mu + v.slope * self.sigma**2 * theta, self.sigma)
        return super().tilted(v, theta, log_normalizer)


@dataclass(frozen=True)
class ExponentialModel(ContinuousModel):
    """Exponential law with the given ``rate`` (mean 1 / rate), support [0, inf)."""

    rate: float = 1.0

    family = "exponential"
    lower = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise InvalidModel("exponential needs a finite rate > 0")

    def params(self) -> dict:
        return {"rate": self.rate}

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return 1.0 / self.rate

    def tail(self, a: float) -> float:
        return 1.0 if a <= 0 else math.exp(-self.rate * a)

    def check_points(self) -> np.ndarray:
        u = np.linspace(0.0005, 0.9995, 161)
        return -np.log1p(-u) / self.rate

    def theta_domain(self, v):
        if v.kind == "identity":
            return -math.inf, self.rate
        if v.kind == "affine":
            return -math.inf, (self.rate / v.slope if v.slope > 0 else math.inf)
        if v.kind == "log":
            return -1.0, math.inf
        return -math.inf, math.inf

    def _exact_stats(self, v, theta):
        lam = self.rate
        if v.kind in ("identity", "affine"):
            slope, icpt = (1.0, 0.0) if v.kind == "identity" else (v.slope, v.intercept)
            r = lam - slope * theta
            return TiltStats(
                theta * icpt + math.log(lam / r),
                icpt + slope / r,
                (slope / r) ** 2,
            )
        if v.kind == "log":
            # E X^theta = Gamma(1 + theta) / rate^theta
            return TiltStats(
                float(special.gammaln(1.0 + theta)) - theta * math.log(lam),
                float(special.digamma(1.0 + theta)) - math.log(lam),
                float(special.polygamma(1, 1.0 + theta)),
            )
        return None

    def tilted(self, v, theta, log_normalizer):
        if v.kind == "identity":
            return ExponentialModel(self.rate - theta)
        if v.kind == "affine":
            return ExponentialModel(self.rate - v.slope * theta)
        return super().tilted(v, theta, log_normalizer)


@dataclass(frozen=True, eq=False)
class GridModel(ContinuousModel):
    """Density tabulated on ordered nodes, integrated with the trapezoid rule.

    The density is linearly interpolated between nodes and is zero outside
    them.  Values are rescaled by their trapezoid mass (which must already be
    within 1e-6 of one) so that expectations are exactly normalized.
    """

    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0))
    density: np.ndarray = field(default_factory=lambda: np.zeros(0))

    family = "grid"

    def __post_init__(self):
        nodes, dens = _readonly(self.nodes), np.array(self.density, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2 or nodes.shape != dens.shape:
            raise InvalidModel("grid needs at least two nodes with one density value each")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(dens))):
            raise InvalidModel("grid nodes and densities must be finite")
        if np.any(np.diff(nodes) <= 0):
            raise InvalidModel("grid nodes must be strictly increasing")
        if np.any(dens < 0):
            raise InvalidModel("grid density values must be non-negative")
        mass = float(np.trapezoid(dens, nodes))
        if abs(mass - 1.0) > GRID_MASS_TOL:
            raise InvalidModel(f"grid density integrates to {mass!r}, not 1 within {GRID_MASS_TOL}")
        dens = dens / mass
        dens.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "density", dens)

    @property
    def lower(self) -> float:
        return float(self.nodes[0])

    @property
    def upper(self) -> float:
        return float(self.nodes[-1])

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid weight times density at each node."""
        h = np.diff(self.nodes)
        w = np.zeros_like(self.nodes)
        w[:-1] += h / 2
        w[1:] += h / 2
        return w * self.density

    def params(self) -> dict:
        return {"nodes": self.nodes.tolist(), "density": self.density.tolist()}

    def pdf(self, x):
        out = np.interp(np.asarray(x, dtype=float), self.nodes, self.density, left=0.0, right=0.0)
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return float(np.trapezoid(self.nodes * self.density, self.nodes))

    def tail(self, a: float) -> float:
        if a <= self.nodes[0]:
            return 1.0
        if a >= self.nodes[-1]:
            return 0.0
        keep = self.nodes > a
        xs = np.concatenate(([a], self.nodes[keep]))
        fs = np.concatenate(([self.pdf(a)], self.density[keep]))
        return float(np.trapezoid(fs, xs))

    def check_points(self) -> np.ndarray:
        return self.nodes

    def _node_values(self, v: ValueFunction):
        live = self.weights > 0
        vals = np.asarray(v(self.nodes[live]), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise EvaluationError(f"v = {v.describe()} is not finite on a grid node carrying mass")
        return live, vals

    def value_range(self, v):
        _, vals = self._node_values(v)
        return float(vals.min()), float(vals.max())

    def top_mass(self, v):
        live, vals = self._node_values(v)
        return math.fsum(self.weights[live][vals == vals.max()])

    def bottom_mass(self, v):
        live, vals = self._node_values(v)
        return math.fsum(self.weights[live][vals == vals.min()])

    def _exact_stats(self, v, theta):
        live, vals = self._node_values(v)
        return _weighted_stats(np.log(self.weights[live]), vals, theta)

    def tilted(self, v, theta, log_normalizer):
        with np.errstate(divide="ignore", invalid="ignore"):
            vall = np.asarray(v(self.nodes), dtype=float)
            dens = np.where(self.density > 0, self.density * np.exp(theta * vall - log_normalizer), 0.0)
        # end nodes with zero trapezoid weight carry no mass; mirror that
        dens = np.where(np.isfinite(dens), dens, 0.0)
        return GridModel(self.nodes, dens / float(np.trapezoid(dens, self.nodes)))


Model = DiscreteModel | ContinuousModel

_FAMILIES: dict[str, Callable[..., ContinuousModel]] = {
    "gaussian": GaussianModel,
    "normal": GaussianModel,
    "exponential": ExponentialModel,
}


def closed_form(family: str, **params) -> ContinuousModel:
    """Build a closed-form family by its string tag, e.g. ``closed_form("gaussian", mu=0, sigma=1)``."""
    try:
        ctor = _FAMILIES[family.lower()]
    except KeyError:
        raise InvalidModel(f"unknown family {family!r}; expected one of {sorted(set(_FAMILIES))}") from None
    try:
        return ctor(**{k: float(val) for k, val in params.items()})
    except TypeError as exc:
        raise InvalidModel(f"bad parameters for {family}: {exc}") from None


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def validate_value_function(model: Model, v: ValueFunction) -> None:
    """Check that v is non-decreasing and midpoint-concave on the model's support.

    Raises :class:`InvalidValueFunction` when either hypothesis fails and
    :class:`EvaluationError` when v is not finite where the model has mass.
    """
    if v.kind == "log" and model.lower < 0:
        raise InvalidValueFunction("v = log needs a strictly positive support")
    if v.kind == "log" and isinstance(model, DiscreteModel) and model.support[0] <= 0:
        raise InvalidValueFunction("v = log needs a strictly positive support")
    pts = np.asarray(model.check_points(), dtype=float)
    if v.kind == "log":
        pts = pts[pts > 0]
    if v.kind == "table":
        inside = [x for x in v.knots_x if model.lower <= x <= model.upper]
        pts = np.unique(np.concatenate((pts, inside)))
    if pts.size > 400:
        pts = pts[np.linspace(0, pts.size - 1, 400).astype(int)]
    vals = np.asarray(v(pts), dtype=float)
    if isinstance(model, DiscreteModel):
        model.values(v)
    if np.any(np.diff(vals) < -CONCAVITY_TOL * np.maximum(1.0, np.abs(vals[1:]))):
        raise InvalidValueFunction(f"v = {v.describe()} is not non-decreasing on the support")
    i, j = np.triu_indices(pts.size, k=2)
    mid = np.asarray(v((pts[i] + pts[j]) / 2), dtype=float)
    chord = (vals[i] + vals[j]) / 2
    finite = np.isfinite(mid) & np.isfinite(chord)
    if np.any(mid[finite] < chord[finite] - CONCAVITY_TOL * np.maximum(1.0, np.abs(chord[finite]))):
        raise InvalidValueFunction(f"v = {v.describe()} is not concave on the support")


def mean_v(model: Model, v: ValueFunction = IDENTITY) -> float:
    """E_Q v(X)."""
    if isinstance(model, DiscreteModel):
        vals = model.values(v)
        return _exact_sum(zip(model.prob[model.positive], vals))
    if v.kind == "identity":
        return model.mean()
    return model.tilt_stats(v, 0.0).mean


def tilt_stats(model: Model, v: ValueFunction, theta: float) -> TiltStats:
    """K, K' and K'' at ``theta`` in one pass."""
    theta = float(theta)
    if theta == 0.0:
        m = mean_v(model, v)
        return TiltStats(0.0, m, model.tilt_stats(v, 0.0).var)
    return model.tilt_stats(v, theta)


def cgf(model: Model, v: ValueFunction, theta: float) -> float:
    """log E_Q exp(theta v(X))."""
    if float(theta) == 0.0:
        # validate v on the support even though the value is known
        model.tilt_stats(v, 0.0)
        return 0.0
    return model.tilt_stats(v, float(theta)).log_mgf


def cgf_prime(model: Model, v: ValueFunction, theta: float) -> float:
    """Mean of v(X) under the law tilted by ``theta``; the derivative of :func:`cgf`."""
    if float(theta) == 0.0:
        return mean_v(model, v)
    return model.tilt_stats(v, float(theta)).mean


def cgf_second(model: Model, v: ValueFunction, theta: float) -> float:
    """Variance of v(X) under the tilted law; the second derivative of :func:`cgf`."""
    return model.tilt_stats(v, float(theta)).var


def tail_prob(model: Model, a: float) -> float:
    """P(X >= a)."""
    return float(model.tail(float(a)))
