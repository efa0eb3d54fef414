"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - optimizer.
"""

import numpy as np
import pytest
from ratectl.controller import init_weights
from ratectl.training import AdamState, adam_step, step_lr
from ratectl.training.adam import EPSILON


def test_zero_gradient():
    """Zero gradient leaves weights untouched and decays the moments."""
    weights = init_weights(0, zero_head=False)
    state = AdamState(
        {name: np.ones_like(t) for name, t in weights.tensors.items()},
        {name: np.ones_like(t) for name, t in weights.tensors.items()},
        3,
    )
    new_weights, new_state = adam_step(weights, state, weights.zeros_like(), 1e-3)
    assert new_state.step == 4
    assert np.allclose(new_state.m["head.w"], 0.9)
    assert np.allclose(new_state.v["head.w"], 0.999)
    # bias-corrected first moment is non-zero, weights move against the old momentum
    assert np.all(new_weights["head.w"] < weights["head.w"])


def test_first_step():
    """First step moves every entry by about the learning rate against the gradient sign."""
    weights = init_weights(0)
    grads = {name: np.full(t.shape, -0.5) for name, t in weights.tensors.items()}
    grads["head.b"] = np.array([2.0])
    new_weights, state = adam_step(weights, AdamState.zeros(weights), grads, 1e-3)

    assert state.step == 1
    assert new_weights["head.b"][0] == pytest.approx(-1e-3 * 2.0 / (2.0 + EPSILON), rel=1e-12)
    assert np.allclose(new_weights["gate.w1"] - weights["gate.w1"], 1e-3 * 0.5 / (0.5 + EPSILON), rtol=1e-9)


def test_inputs_untouched():
    """Update returns new objects."""
    weights = init_weights(5)
    snapshot = weights.copy()
    grads = {name: np.ones(t.shape) for name, t in weights.tensors.items()}
    state = AdamState.zeros(weights)
    adam_step(weights, state, grads, 1e-2)
    assert state.step == 0
    assert not np.any(state.m["head.w"])
    for name, tensor in snapshot.tensors.items():
        assert np.array_equal(weights[name], tensor)


def test_deterministic():
    """Equal inputs give bitwise equal outputs."""
    weights = init_weights(5, zero_head=False)
    grads = {name: np.sin(t) for name, t in weights.tensors.items()}
    first, _ = adam_step(weights, AdamState.zeros(weights), grads, 1e-4)
    second, _ = adam_step(weights, AdamState.zeros(weights), grads, 1e-4)
    for name in first.tensors:
        assert np.array_equal(first[name], second[name])


@pytest.mark.parametrize(
    "epoch, expected",
    [(0, 1e-4), (4, 1e-4), (5, 5e-5), (10, 2.5e-5), (19, 1.25e-5)],
)
def test_step_lr(epoch: int, expected: float):
    """Learning rate halves every five epochs."""
    assert step_lr(1e-4, epoch, 5, 0.5) == pytest.approx(expected, rel=1e-12)
