"""Sine-square waveform classification with exact probabilities."""

from stochres import ActivationDistribution, gen_sine_square, sample_weights
from stochres.esn import default_window
from stochres.pipeline import evaluate, readouts

task = gen_sine_square()
for L in (1, 2, 3, 4):
    cfg = sample_weights(10 + L, L, 1, ActivationDistribution.qubit(), default_window("qubit"))
    errs = {m: evaluate(readouts(cfg, task, m), task).metric
            for m in ("deterministic", "stochastic_exact")}
    print(f"L = {L}: test error deterministic {errs['deterministic']:.1f}%, "
          f"stochastic {errs['stochastic_exact']:.1f}%")
