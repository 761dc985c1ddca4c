import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from stochres.tasks import (AffineScale, DivergenceError, TaskData, gen_lorenz_x, gen_sine_square,
                            integrate_lorenz, lorenz_rhs, rk4_step)


def lorenz_oracle(t, s):
    x, y, z = s
    return [10.0 * (y - x), x * (28.0 - z) - y, x * y - 8.0 / 3.0 * z]


def test_sine_square_waveforms():
    data = gen_sine_square(10, label_seed=3, washout=8, train_len=48, test_len=24)
    u, y = data.inputs[:, 0], data.targets
    for k in range(80):
        if y[k] == 0:
            assert u[k] == pytest.approx(math.sin(math.pi / 4 * k), abs=1e-12)
        else:
            assert u[k] == (-1.0) ** (k // 4)
    blocks = y.reshape(10, 8)
    assert (blocks == blocks[:, :1]).all()


def test_sine_square_defaults_and_determinism():
    a = gen_sine_square()
    assert (a.washout, a.train_len, a.test_len) == (96, 3000, 504)
    assert 0.4 < a.targets.mean() < 0.6
    np.testing.assert_array_equal(a.targets, gen_sine_square().targets)
    assert not np.array_equal(a.targets, gen_sine_square(label_seed=1).targets)
    with pytest.raises(ValueError):
        gen_sine_square(10, washout=8, train_len=48, test_len=10)


def test_rk4_step_exact_on_cubic():
    # RK4 integrates dy/dt = 3 t^2 (autonomous form) exactly
    f = lambda s: np.array([1.0, 3.0 * s[0] ** 2])
    s = np.array([0.0, 0.0])
    for _ in range(10):
        s = rk4_step(f, s, 0.1)
    assert s[1] == pytest.approx(1.0, abs=1e-13)


def test_unrolled_integrator_matches_generic_rk4():
    out = integrate_lorenz(30, dt=0.05, substeps=5)
    s = np.array([0.5, 0.1, 0.2])
    for j in range(30):
        np.testing.assert_allclose(out[j], s, rtol=1e-12, atol=1e-12)
        for _ in range(5):
            s = rk4_step(lorenz_rhs, s, 0.01)


def test_integrator_matches_high_order_reference():
    out = integrate_lorenz(11, dt=0.1, substeps=100)
    ref = solve_ivp(lorenz_oracle, (0, 1.0), [0.5, 0.1, 0.2], method="DOP853",
                    t_eval=np.linspace(0, 1.0, 11), rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(out, ref.y.T, atol=1e-7)


def test_divergence_reported():
    with pytest.raises(DivergenceError, match="substeps=1"):
        integrate_lorenz(50, dt=1.0, substeps=1)


def test_lorenz_task_structure():
    data = gen_lorenz_x(washout=20, train_len=300, test_len=80, burn_in=50)
    assert data.T == 400 and data.name == "lorenz_x"
    u, y = data.inputs[:, 0], data.targets
    # inputs are the previous targets (up to clipping outside the training window)
    np.testing.assert_allclose(u[1:], np.clip(y[:-1], -1, 1), atol=1e-12)
    tr = u[data.train_slice]
    assert tr.min() == pytest.approx(-1.0) and tr.max() == pytest.approx(1.0)
    assert np.abs(u).max() <= 1.0
    assert data.metadata["clipped"] == int(np.sum(np.abs(y[:-1]) > 1.0 + 1e-12))
    raw = integrate_lorenz(50 + 401)[50:, 0]
    np.testing.assert_allclose(data.input_scale.invert(y), raw[1:], rtol=1e-10, atol=1e-10)


def test_affine_scale():
    s = AffineScale.onto_unit_interval([2.0, 4.0, 6.0])
    np.testing.assert_allclose(s.apply([2.0, 4.0, 6.0]), [-1, 0, 1])
    np.testing.assert_allclose(s.invert(s.apply([3.3])), [3.3])
    with pytest.raises(ValueError):
        AffineScale.onto_unit_interval([1.0, 1.0])


def test_task_data_validation_and_csv(tmp_path):
    with pytest.raises(ValueError):
        TaskData(np.zeros(5), np.zeros(5), 1, 2, 1)
    data = gen_sine_square(2, washout=4, train_len=8, test_len=4)
    data.to_csv(tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "k,u,y,split" and len(lines) == 17
    assert lines[1].endswith("washout") and lines[-1].endswith("test")
