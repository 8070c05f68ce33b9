"""Chernoff tail bounds and the I-projections that realize them.

Quick start::

    >>> import numpy as np
    >>> from chernoff_forms import DiscreteModel, bound
    >>> q = DiscreteModel(np.arange(1.0, 9.0), [0.05, 0.4, 0.2, 0.15, 0.1, 0.07, 0.02, 0.01])
    >>> round(bound(q, a=4).bound, 4)
    0.8829
"""

from .chernoff import BoundReport, TiltSolution, bound, bound_log, optimize_theta, solve_tilt
from .errors import *  # noqa: F401,F403
from .measures import (
    IDENTITY,
    ContinuousModel,
    DiscreteModel,
    ExponentialModel,
    GaussianModel,
    GridModel,
    TiltedDensity,
    ValueFunction,
    cgf,
    cgf_prime,
    cgf_second,
    closed_form,
    mean_v,
    tail_prob,
    validate_value_function,
)
from .mle import (
    Sample,
    asymptotic_experiment,
    chernoff_from_likelihood,
    draw_sample,
    log_likelihood,
    max_log_likelihood,
    ml_estimate,
    sample_mean_v,
)
from .projection import (
    Projection,
    generalized_projection_bound,
    i_projection,
    kl_divergence,
    product_form_bound,
    ratio_form_bound,
    tilt,
)

__version__ = "0.1.0"
