"""Estimate the outcome distribution from sampled runs and compare with the exact one.

Sampling starts every run from the all-zeros outcome, so the exact trajectory
is started from the same point mass.
"""

import numpy as np

from stochres import (ActivationDistribution, accumulate_counts, estimate_probabilities,
                      run_trajectory, sample_weights, simulate_exact)
from stochres.esn import default_window
from stochres.sampler import run_key

cfg = sample_weights(7, 2, 1, ActivationDistribution.optical(), default_window("optical"))
u = np.random.default_rng(7).uniform(-1, 1, 50)
exact = simulate_exact(cfg, u, np.eye(4)[0])

print("one run, first 8 steps (rows are detector bits):")
print(run_trajectory(cfg, u, run_key(0, 0))[:8].T)

for n_runs in (100, 10_000, 100_000):
    est = estimate_probabilities(accumulate_counts(cfg, u, n_runs, master_seed=0))
    print(f"N_runs = {n_runs:>6}: max |P_est - P| = {np.abs(est - exact).max():.4f}")

# the same master seed gives the same counts whatever the worker count
a = accumulate_counts(cfg, u, 70_000, 3, workers=1).counts
b = accumulate_counts(cfg, u, 70_000, 3, workers=4).counts
print("workers 1 vs 4 identical:", np.array_equal(a, b))
