"""ADAM update behavior against closed-form limits."""

import numpy as np
import pytest

from deepbsde.autodiff import Tensor
from deepbsde.errors import NonFiniteGradientError
from deepbsde.optim import AdamState, adam_step


def make_param(value, name="p"):
    p = Tensor(np.asarray(value, dtype=float), name=name)
    p.grad = np.zeros_like(p.data)
    return p


def test_zero_gradient_is_a_fixed_point():
    p = make_param([1.0, -2.0, 3.5])
    state = AdamState.for_params([p])
    state.first_moment[0][:] = 0.3
    state.second_moment[0][:] = 0.7
    before = p.data.copy()
    for _ in range(50):
        p.grad = np.zeros_like(p.data)
        adam_step([p], state, lr=0.1)
    np.testing.assert_array_equal(p.data, before)
    # moments decay toward zero
    assert np.all(np.abs(state.first_moment[0]) < 0.3 * 0.9 ** 40)
    assert np.all(state.second_moment[0] < 0.7)
    assert state.step_count == 50


def test_constant_gradient_update_approaches_lr_times_sign():
    p = make_param(0.0)
    state = AdamState.for_params([p])
    g = 0.37
    lr = 0.01
    prev = p.data.copy()
    for _ in range(500):
        prev = p.data.copy()
        p.grad = np.asarray(g)
        adam_step([p], state, lr=lr)
    last_update = float(prev - p.data)
    assert last_update == pytest.approx(lr * np.sign(g), rel=1e-4)


def test_beta_zero_reduces_to_normalized_gradient_step():
    p = make_param([2.0, -1.0])
    state = AdamState.for_params([p], beta1=0.0, beta2=0.0, eps=1e-8)
    g = np.array([0.5, -0.125])
    p.grad = g.copy()
    before = p.data.copy()
    adam_step([p], state, lr=0.2)
    expected = before - 0.2 * g / (np.abs(g) + 1e-8)
    np.testing.assert_allclose(p.data, expected, rtol=1e-12)


def test_step_count_increments_by_one():
    p = make_param(1.0)
    state = AdamState.for_params([p])
    for want in range(1, 6):
        p.grad = np.asarray(0.1)
        adam_step([p], state, lr=0.1)
        assert state.step_count == want


def test_non_finite_gradient_names_parameter_and_step():
    p = make_param(1.0, name="step_net[3].W1")
    state = AdamState.for_params([p])
    p.grad = np.asarray(0.1)
    adam_step([p], state, lr=0.1)
    p.grad = np.asarray(np.nan)
    with pytest.raises(NonFiniteGradientError, match=r"step_net\[3\]\.W1.*step 2"):
        adam_step([p], state, lr=0.1)


def test_none_gradient_means_zero():
    p = make_param([1.0, 2.0])
    p.grad = None
    state = AdamState.for_params([p])
    adam_step([p], state, lr=0.5)
    np.testing.assert_array_equal(p.data, [1.0, 2.0])


def test_bad_learning_rate_rejected():
    p = make_param(1.0)
    state = AdamState.for_params([p])
    with pytest.raises(ValueError):
        adam_step([p], state, lr=0.0)
