"""The eight-point worked example and its published figures.

X takes values 1..8 with the pmf below (E X = 3.19).  The published table
gives the bound and the true tail at a = 4, 5, 6, 7 and the projection for
a = 4, each rounded as printed; the tolerances are the ones used to decide
PASS/FAIL when reproducing it.
"""

from __future__ import annotations

import numpy as np

from .measures import DiscreteModel

SUPPORT = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0)
PROB = (0.05, 0.4, 0.2, 0.15, 0.10, 0.07, 0.02, 0.01)
MEAN = 3.19

# a -> (printed bound, tolerance, true tail)
PUBLISHED_BOUNDS = {
    4.0: (0.8829, 5e-4, 0.35),
    5.0: (0.5675, 5e-4, 0.2),
    6.0: (0.27, 5e-3, 0.1),
    7.0: (0.087, 5e-4, 0.03),
}

PUBLISHED_PROJECTION_A4 = (0.0236, 0.2526, 0.1692, 0.1699, 0.1517, 0.1422, 0.0544, 0.0364)
PROJECTION_TOL = 5e-4


def model() -> DiscreteModel:
    return DiscreteModel(np.array(SUPPORT), np.array(PROB))
