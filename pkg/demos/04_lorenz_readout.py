"""Train linear readouts on Lorenz-X one-step prediction: stochastic vs deterministic."""

from stochres import ActivationDistribution, gen_lorenz_x, sample_weights
from stochres.esn import default_window
from stochres.pipeline import evaluate, readouts

task = gen_lorenz_x()
print(f"T = {task.T} (washout {task.washout}, train {task.train_len}, test {task.test_len}), "
      f"dt = {task.metadata['dt']}")

for L in (2, 3, 4):
    cfg = sample_weights(L, L, 1, ActivationDistribution.qubit(), default_window("qubit"))
    row = []
    for mode in ("deterministic", "stochastic_exact"):
        ev = evaluate(readouts(cfg, task, mode), task)
        row.append(f"{mode} NMSE {ev.metric:.4f} (lambda_min {ev.lambda_min:.1e})")
    print(f"L = {L}: " + "; ".join(row))
