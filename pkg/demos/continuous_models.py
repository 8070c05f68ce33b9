"""Bounds for continuous models and general value functions.

The same machinery runs on densities: closed-form Gaussian and exponential
families, or any density tabulated on a grid.  The value function v need
not be the identity; any nondecreasing concave v works, for instance
v = log, which bounds P(X >= a) through the moments E X^theta.

Run:  python demos/continuous_models.py
"""

import math

import numpy as np

from chernoff_forms import (
    IDENTITY,
    ExponentialModel,
    GaussianModel,
    GridModel,
    ValueFunction,
    bound,
)

# Exponential(1): P(X >= a) = e^{-a} against the bound a e^{1-a}.
e = ExponentialModel(1.0)
print("Exp(1), v = identity")
for a in (2.0, 5.0, 10.0):
    rep = bound(e, IDENTITY, a)
    print(f"  a = {a:4}: bound {rep.bound:.3e}  true {rep.true_tail:.3e}  theta {rep.tilt.theta_hat:.4f}")

# With v = log the tilt multiplies the density by x^theta; the optimum sits
# at theta with digamma(1 + theta) = log a.
print("Exp(1), v = log")
for a in (2.0, 5.0, 10.0):
    rep = bound(e, ValueFunction.log(), a)
    print(f"  a = {a:4}: bound {rep.bound:.3e}  true {rep.true_tail:.3e}  theta {rep.tilt.theta_hat:.4f}")
print()

# A Gaussian mixture only known on a grid.  The grid model treats the
# tabulated density as piecewise linear.
x = np.linspace(-8, 12, 4001)
dens = 0.7 * np.exp(-0.5 * x**2) / math.sqrt(2 * math.pi) + 0.3 * np.exp(-0.5 * (x - 4) ** 2) / math.sqrt(2 * math.pi)
mix = GridModel(x, dens)
print(f"mixture 0.7 N(0,1) + 0.3 N(4,1), mean {mix.mean():.4f}")
for a in (3.0, 5.0, 7.0):
    rep = bound(mix, IDENTITY, a)
    print(f"  a = {a}: bound {rep.bound:.4e}  true {rep.true_tail:.4e}")
print()

# For a single Gaussian the grid answer can be checked against the closed form.
g = GaussianModel(1.0, 2.0)
wide = np.linspace(-15, 17, 6401)
grid = GridModel(wide, np.exp(-0.5 * ((wide - 1) / 2) ** 2) / (2 * math.sqrt(2 * math.pi)))
a = 4.0
print(f"N(1, 4), a = {a}: closed form {bound(g, IDENTITY, a).bound:.8f}, grid {bound(grid, IDENTITY, a).bound:.8f}")
