"""Four ways to write the same Chernoff bound.

Given the optimal tilt, the bound can be computed as
  * exp(K(theta) - theta v(a)), the definition;
  * exp(-KL(p_hat || q)), the divergence of the I-projection;
  * prod (q_i / p_hat_i)^{p_hat_i}, the product form;
  * q(a) / p_hat(a), the ratio of masses (or densities) at the threshold.
The last one is the surprising one: a single atom carries all the
information.  This script checks the four agree on random discrete models
and shows the ratio form for continuous families.

Run:  python demos/equivalent_forms.py
"""

import math

import numpy as np

from chernoff_forms import (
    IDENTITY,
    DiscreteModel,
    ExponentialModel,
    GaussianModel,
    bound,
    generalized_projection_bound,
)

rng = np.random.default_rng(1)

print("random discrete models (12 atoms, a = an atom above the mean)")
print("   definition     exp(-KL)      product       ratio")
for _ in range(5):
    support = np.cumsum(rng.uniform(0.5, 1.5, size=12))
    q = DiscreteModel(support, rng.dirichlet(np.ones(12)))
    above = support[(support > q.mean()) & (support < support[-1])]
    a = float(rng.choice(above))
    rep = bound(q, IDENTITY, a)
    print(f"  {rep.bound:.10f}  {math.exp(-rep.kl_value):.10f}  {rep.product_form:.10f}  {rep.ratio_form:.10f}")
print()

# For densities the ratio form compares the two pdfs at a.  For the standard
# Gaussian the tilted law is N(a, 1), so q(a)/p_hat(a) = exp(-a^2/2).
g = GaussianModel(0.0, 1.0)
for a in (0.5, 1.0, 2.0):
    rep = bound(g, IDENTITY, a)
    print(f"N(0,1), a = {a}: ratio form {rep.ratio_form:.12f}, exp(-a^2/2) = {math.exp(-a * a / 2):.12f}")

# Exp(1) tilts to Exp(1/a): the density ratio at a is a e^{1-a}.
e = ExponentialModel(1.0)
print(f"Exp(1),  a = 2:   1 / (dP/dQ)(a) = {generalized_projection_bound(e, IDENTITY, 2.0):.12f},"
      f" 2/e = {2 / math.e:.12f}")
