"""The Chernoff tilt as a maximum likelihood estimate.

Tilting q by exp(theta x) gives an exponential family.  Its likelihood
equation, K'(theta) = sample mean, is the same equation that picks the
Chernoff tilt.  So if a sample happens to average exactly a, the ML
estimate is the Chernoff theta-hat, and the maximized likelihood encodes the
bound:

    bound = ( prod q_i^{n_i} / L_max )^{1/n}.

Sampling from p-hat itself, the per-observation log-likelihood settles on
-H(p_hat), a law-of-large-numbers statement about the family.

Run:  python demos/ml_link.py
"""

import numpy as np

from chernoff_forms import (
    IDENTITY,
    Sample,
    asymptotic_experiment,
    bound,
    chernoff_from_likelihood,
    max_log_likelihood,
    sample_mean_v,
)
from chernoff_forms import worked_example

q = worked_example.model()

# 100 observations arranged to average exactly 4.
sample = Sample((2, 25, 18, 17, 15, 14, 5, 4))
print(f"n = {sample.n}, sample mean = {sample_mean_v(q, IDENTITY, sample)}")
sol, loglik = max_log_likelihood(q, IDENTITY, sample)
rep = bound(q, IDENTITY, 4.0)
print(f"theta_ML  = {sol.theta_hat:.12f}")
print(f"theta_hat = {rep.tilt.theta_hat:.12f}")
print(f"bound from likelihood = {chernoff_from_likelihood(q, sample, loglik):.12f}")
print(f"direct bound          = {rep.bound:.12f}")
print()

rows = asymptotic_experiment(q, IDENTITY, 4.0, [100, 10_000, 1_000_000], seed=42)
print(f"-H(p_hat) = {rows[0].minus_entropy_target:.6f}")
print("        n    l/n          |l/n + H|    max |n_i/n - p_i|")
for r in rows:
    print(f"{r.n:9d}    {r.loglik_over_n:.6f}   {r.deviation:.2e}     {r.empirical_max_dev:.2e}")
print()
print("both deviations shrink as n grows" if np.all(np.diff([r.deviation for r in rows]) < 0)
      else "deviations did not shrink monotonically for this seed")
