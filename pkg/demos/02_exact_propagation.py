"""Build a 3-detector qubit network and propagate its outcome distribution exactly."""

import numpy as np

from stochres import ActivationDistribution, build_transition_matrix, sample_weights, simulate_exact
from stochres.esn import default_window, outcome_bits

rho = ActivationDistribution.qubit()
cfg = sample_weights(rng_seed=1, L=3, n=1, rho=rho, r_zeta=default_window("qubit"))
print("A =\n", np.round(cfg.A, 3))
print("B =", np.round(cfg.B.ravel(), 3))
print(f"worst-case |z| = {cfg.worst_case_z().max():.4f} < pi/4 = {np.pi / 4:.4f}")

p = build_transition_matrix(cfg, [0.5])
print("p(0.5) column sums:", np.round(p.sum(axis=0), 15))

u = np.sin(np.pi / 4 * np.arange(16))
traj = simulate_exact(cfg, u)
print("outcome  bits     P_16")
for a, prob in enumerate(traj[-1]):
    print(f"  {a}      {outcome_bits(a, 3)}  {prob:.4f}")
