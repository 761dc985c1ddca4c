"""How many runs are needed? Test NMSE versus run count, and the 3 / lambda_min rule."""

from stochres import ActivationDistribution, gen_lorenz_x, noise_sweep, runs_heuristic, sample_weights
from stochres.esn import default_window

task = gen_lorenz_x()
cfg = sample_weights(0, 2, 1, ActivationDistribution.qubit(), default_window("qubit"))
res = noise_sweep(cfg, task, [100, 1000, 10_000, 100_000], master_seed=0)

print(f"exact-probability NMSE {res.exact_metric:.4f}, lambda_min(K) = {res.lambda_min:.3e}")
print(f"suggested runs ~ 3 / lambda_min = {runs_heuristic(res.lambda_min)}")
for n, m in zip(res.runs_grid, res.metric_values):
    print(f"  N_runs = {n:>6}: NMSE {m:.4f}")
