"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - reverse pass and gradient check.
"""

import dataclasses

import numpy as np
import pytest
from ratectl.control import BudgetSettings, PiConfig
from ratectl.controller import init_weights
from ratectl.controller.weights import TENSOR_SPECS
from ratectl.pipeline import EpisodeTape
from ratectl.plant import SyntheticPlant
from ratectl.training import (
    GradCheckException,
    LossWeights,
    TrainConfig,
    TrainingException,
    assert_gradients,
    episode_backward,
    gradient_check,
    run_episode,
)

EPISODE = TrainConfig(episode_len=8)


def test_zero_head_smooth_only(plant: SyntheticPlant):
    """At the zero-head anchor the smoothness term alone is stationary."""
    weights = init_weights(1)
    tape, target = run_episode(plant, weights, 5, 1024.0, EPISODE, PiConfig(), BudgetSettings())
    grads = episode_backward(tape, target, LossWeights(0.0, 0.0, 1.0), weights)
    assert set(grads) == set(TENSOR_SPECS)
    for grad in grads.values():
        assert not np.any(grad)


def test_zero_head_moves_head_only(plant: SyntheticPlant):
    """At the zero-head anchor only the head receives gradient."""
    weights = init_weights(1)
    tape, target = run_episode(plant, weights, 5, 1024.0, EPISODE, PiConfig(), BudgetSettings())
    grads = episode_backward(tape, target, LossWeights(), weights)
    assert np.any(grads["head.w"])
    for name, grad in grads.items():
        if not name.startswith("head."):
            assert not np.any(grad)


def test_gradient_check(plant: SyntheticPlant):
    """Analytic gradients of all tensors agree with finite differences."""
    weights = init_weights(11, zero_head=False)
    pi_config = PiConfig()
    tape, target = run_episode(plant, weights, 21, 512.0, EPISODE, pi_config, BudgetSettings())
    errors = gradient_check(plant, weights, tape, pi_config.bounds, target, LossWeights(), samples=4, seed=3)
    assert set(errors) == set(TENSOR_SPECS)
    assert max(errors.values()) < 1e-4
    assert_gradients(errors, 1e-4)


def test_gradient_check_corrupted(plant: SyntheticPlant):
    """Corrupted reverse pass is detected and the broken tensor named."""

    def corrupted(*args, **kwargs):
        grads = episode_backward(*args, **kwargs)
        grads["gate.w1"] = grads["gate.w1"] * 1.5
        return grads

    weights = init_weights(11, zero_head=False)
    pi_config = PiConfig()
    tape, target = run_episode(plant, weights, 21, 512.0, EPISODE, pi_config, BudgetSettings())
    errors = gradient_check(
        plant, weights, tape, pi_config.bounds, target, LossWeights(), samples=4, seed=3, backward=corrupted
    )
    with pytest.raises(GradCheckException, match="gate.w1"):
        assert_gradients(errors, 1e-4)


def test_saturated_frames(plant: SyntheticPlant):
    """Frames whose lambda is clipped contribute no rate or distortion gradient."""
    weights = init_weights(2, zero_head=False)
    tape, target = run_episode(plant, weights, 8, 1024.0, EPISODE, PiConfig(), BudgetSettings())
    saturated = EpisodeTape(tape.initial_state, [dataclasses.replace(frame, saturated=True) for frame in tape.frames])
    grads = episode_backward(saturated, target, LossWeights(1.0, 100.0, 0.0), weights)
    for grad in grads.values():
        assert not np.any(grad)


def test_empty_tape():
    """Reverse pass of an empty tape is refused."""
    with pytest.raises(TrainingException):
        episode_backward(EpisodeTape(), None, LossWeights(), init_weights(0))


def test_tape_without_controller(plant: SyntheticPlant):
    """Tape recorded by the base controller alone has nothing to differentiate."""
    tape, target = run_episode(plant, None, 5, 1024.0, EPISODE, PiConfig(), BudgetSettings())
    with pytest.raises(TrainingException):
        episode_backward(tape, target, LossWeights(), init_weights(0))
