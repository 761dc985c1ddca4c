"""Stochastic reservoir computers simulated as controlled Markov chains."""

from .activations import (ActivationDistribution, check_universality_criteria, rho_optical,
                          rho_qubit)
from .analysis import (expected_kest, expected_kest_per_step, min_eigenvalue, noise_sweep,
                       runs_heuristic)
from .baseline import run_deterministic_esn
from .esn import (EsnConfig, block_compose, build_transition_matrix, outcome_bits,
                  sample_weights, simulate_exact)
from .markov import contraction_coefficient, has_positive_row, is_contracting, propagate
from .sampler import (CountTable, accumulate_counts, estimate_probabilities, run_trajectory)
from .tasks import TaskData, gen_lorenz_x, gen_sine_square
from .training import classification_error_rate, fit_ridge, nmse, predict

__version__ = "0.1.0"
