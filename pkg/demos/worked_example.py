"""Walk through the eight-point worked example.

X takes the values 1..8 with a skewed pmf whose mean is 3.19.  For each
threshold a we find the tilt that minimizes E exp(theta (X - a)), compare
the resulting bound with the true tail P(X >= a), and look at the tilted
distribution p-hat that the minimization produces.

Run:  python demos/worked_example.py
"""

import numpy as np

from chernoff_forms import IDENTITY, bound, i_projection, kl_divergence
from chernoff_forms import worked_example

q = worked_example.model()
print(f"E X = {q.mean()}")
print()

# The bound is tight in exponent but loose in absolute terms: at a = 4 it
# promises P(X >= 4) <= 0.88 while the true value is 0.35.
print("   a    theta_hat    bound     true tail")
for a in worked_example.PUBLISHED_BOUNDS:
    rep = bound(q, IDENTITY, a)
    print(f"{a:4.0f}   {rep.tilt.theta_hat:9.5f}   {rep.bound:7.4f}   {rep.true_tail:7.2f}")
print()

# The minimizing tilt is also the closest distribution to q (in KL) among
# all those whose mean is 4.  Its mass moves from the bulk toward the tail.
proj = i_projection(q, IDENTITY, 4.0)
p_hat = proj.tilted.prob
print("   x      q       p_hat")
for x, qi, pi in zip(q.support, q.prob, p_hat):
    print(f"{x:4.0f}   {qi:.3f}   {pi:.4f}")
print(f"mean of p_hat = {p_hat @ q.support:.12f}")
print()

# The divergence of p-hat from q is exactly minus the log of the bound.
kl = kl_divergence(proj.tilted, q)
print(f"KL(p_hat || q) = {kl:.6f}   exp(-KL) = {np.exp(-kl):.6f}")
