"""Fading memory of a controlled Markov chain.

A transition matrix whose columns pairwise share support pulls any two
probability vectors together; the contraction coefficient bounds how fast.
"""

import numpy as np

from stochres.markov import contraction_coefficient, has_positive_row, is_contracting

rng = np.random.default_rng(0)

p = rng.random((4, 4))
p /= p.sum(axis=0)
eps = contraction_coefficient(p)
print(f"dense 4x4: eps = {eps:.4f}, contracting = {is_contracting(p)}, positive row = {has_positive_row(p)}")

P1, P2 = np.eye(4)[0], np.eye(4)[3]
for k in range(6):
    print(f"  step {k}: |P1 - P2|_1 = {np.abs(P1 - P2).sum():.3e}  (bound {2 * eps**k:.3e})")
    P1, P2 = p @ P1, p @ P2

# a permutation never forgets where it started
perm = np.eye(4)[[1, 2, 3, 0]]
print(f"permutation: eps = {contraction_coefficient(perm)}, contracting = {is_contracting(perm)}")
