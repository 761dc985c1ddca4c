import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochres.training import (SingularGramError, classification_error_rate,
                               deterministic_readouts, fit_ridge, gram_matrix, nmse, predict,
                               stochastic_readouts)


def test_scalar_ridge_closed_form():
    fit = fit_ridge([[1.0], [2.0], [3.0]], [2.0, 4.0, 6.0], lam=0.0)
    assert fit.K[0, 0] == pytest.approx(14 / 3, abs=1e-14)
    assert fit.W[0] == pytest.approx(2.0, abs=1e-14)
    assert fit.train_nmse == pytest.approx(0.0, abs=1e-20)


def test_ridge_shrinks_toward_zero():
    # scalar case: W = rhs / (K + lam)
    fit = fit_ridge([[1.0], [2.0], [3.0]], [2.0, 4.0, 6.0], lam=1.0)
    assert fit.W[0] == pytest.approx((28 / 3) / (14 / 3 + 1.0), abs=1e-14)


def test_singular_gram_needs_regularization():
    rows = [[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]
    with pytest.raises(SingularGramError):
        fit_ridge(rows, [1.0, 2.0, 3.0], lam=0.0)
    fit = fit_ridge(rows, [1.0, 2.0, 3.0], lam=1e-10)
    np.testing.assert_allclose(predict(fit.W, rows), [1.0, 2.0, 3.0], atol=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 8), st.floats(1e-8, 1.0))
def test_ridge_matches_normal_equations(seed, D, lam):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(40, D))
    y = rng.normal(size=40)
    fit = fit_ridge(X, y, lam)
    ref = np.linalg.solve(X.T @ X / 40 + lam * np.eye(D), X.T @ y / 40)
    np.testing.assert_allclose(fit.W, ref, rtol=1e-8, atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 6))
def test_gram_symmetric_psd(seed, D):
    X = np.random.default_rng(seed).normal(size=(30, D))
    K = gram_matrix(X)
    np.testing.assert_array_equal(K, K.T)
    assert np.linalg.eigvalsh(K).min() > -1e-12


def test_nmse_examples():
    assert nmse([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0
    # predicting the mean gives NMSE 1
    assert nmse([2.0, 2.0, 2.0], [1.0, 2.0, 3.0]) == pytest.approx(1.0)
    assert nmse([1.5, 2.0, 2.5], [1.0, 2.0, 3.0]) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        nmse([1.0, 1.0], [1.0, 1.0])


def test_classification_error_examples():
    assert classification_error_rate([0.1, 0.6, 0.5, 0.49], [0, 1, 1, 0]) == 0.0
    assert classification_error_rate([0.9, 0.2, 0.7, 0.1], [0, 1, 1, 0]) == 50.0
    with pytest.raises(ValueError):
        classification_error_rate([0.1], [2])


def test_readout_builders():
    X = deterministic_readouts([[0.2, 0.3], [0.4, 0.5]])
    np.testing.assert_array_equal(X[:, -1], 1.0)
    stochastic_readouts([[0.25, 0.75]])
    with pytest.raises(ValueError):
        stochastic_readouts([[0.5, 0.6]])
    with pytest.raises(ValueError):
        predict([1.0, 2.0], [[1.0, 2.0, 3.0]])


def test_fit_result_serialization():
    fit = fit_ridge([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]], [1.0, 2.0, 3.0])
    d = fit.to_dict()
    assert d["lambda"] == 1e-10 and len(d["W"]) == 2
    assert d["K_eigenvalues"]["min"] <= d["K_eigenvalues"]["max"]
