import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochres.markov import (as_probability_vector, as_transition_matrix, contraction_coefficient,
                             has_positive_row, is_contracting, maximizing_pair, propagate)

from conftest import random_stochastic


def brute_contraction(p, rng, trials=2000):
    """Lower bound on the 1-norm contraction from random zero-sum vectors and basis pairs."""
    M = p.shape[0]
    best = 0.0
    for a in range(M):
        for b in range(a + 1, M):
            d = np.zeros(M)
            d[a], d[b] = 1.0, -1.0
            best = max(best, np.abs(p @ d).sum() / 2.0)
    for _ in range(trials):
        d = rng.normal(size=M)
        d -= d.mean()
        best = max(best, np.abs(p @ d).sum() / np.abs(d).sum())
    return best


def test_propagate_hand_example():
    p = np.array([[0.9, 0.2], [0.1, 0.8]])
    np.testing.assert_allclose(propagate(p, [0.5, 0.5]), [0.55, 0.45], atol=1e-15)


def test_propagate_rejects_mismatch():
    with pytest.raises(ValueError):
        propagate(np.eye(2), [1.0, 0.0, 0.0])


def test_probability_vector_validation():
    np.testing.assert_allclose(as_probability_vector([0.5, 0.5 + 1e-14]).sum(), 1.0, atol=1e-15)
    with pytest.raises(ValueError):
        as_probability_vector([0.6, 0.6])
    with pytest.raises(ValueError):
        as_probability_vector([1.1, -0.1])
    with pytest.raises(ValueError):
        as_transition_matrix([[0.5, 0.5], [0.4, 0.5]])


def test_contraction_identity_and_rank_one():
    assert contraction_coefficient(np.eye(3)) == pytest.approx(1.0)
    assert not is_contracting(np.eye(3))
    rank_one = np.tile([[0.2], [0.3], [0.5]], (1, 3))
    assert contraction_coefficient(rank_one) == pytest.approx(0.0, abs=1e-15)
    assert is_contracting(rank_one)
    assert has_positive_row(rank_one)


def test_contraction_two_state_closed_form():
    # for M = 2 the coefficient is |p00 - p01|
    p = np.array([[0.9, 0.3], [0.1, 0.7]])
    assert contraction_coefficient(p) == pytest.approx(0.6)
    assert maximizing_pair(p) in ((0, 1), (1, 0))


def test_orthogonal_supports_not_contracting():
    p = np.array([[1.0, 0.0, 0.5], [0.0, 1.0, 0.5], [0.0, 0.0, 0.0]])
    assert not is_contracting(p)
    assert contraction_coefficient(p) == pytest.approx(1.0)


@pytest.mark.parametrize("M", [2, 3, 4, 8])
def test_coefficient_matches_brute_force(rng, M):
    for _ in range(20):
        p = random_stochastic(rng, M, sparsity=0.3)
        eps = contraction_coefficient(p)
        brute = brute_contraction(p, rng, 300)
        assert brute <= eps + 1e-12
        assert brute >= eps - 1e-12  # basis pairs attain the maximum


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1), st.floats(0.0, 0.8))
def test_contracting_iff_coefficient_below_one(M, seed, sparsity):
    p = random_stochastic(np.random.default_rng(seed), M, sparsity)
    assert is_contracting(p) == (contraction_coefficient(p) < 1.0)
    if has_positive_row(p):
        assert is_contracting(p)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_propagate_preserves_simplex(M, seed):
    rng = np.random.default_rng(seed)
    p = random_stochastic(rng, M, 0.4)
    P = rng.dirichlet(np.ones(M))
    Q = propagate(p, P)
    assert Q.min() >= 0
    assert Q.sum() == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_one_norm_contraction_inequality(M, seed):
    rng = np.random.default_rng(seed)
    p = random_stochastic(rng, M, 0.3)
    eps = contraction_coefficient(p)
    P1, P2 = rng.dirichlet(np.ones(M), size=2)
    lhs = np.abs(p @ (P1 - P2)).sum()
    assert lhs <= eps * np.abs(P1 - P2).sum() + 1e-12
