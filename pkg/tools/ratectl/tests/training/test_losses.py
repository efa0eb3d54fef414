"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - training objective.
"""

import numpy as np
import pytest
from ratectl.control import BudgetSettings, PiConfig
from ratectl.controller import init_weights
from ratectl.plant import SyntheticPlant
from ratectl.training import LossParts, LossWeights, TargetBudget, TrainConfig, build_target_budget, run_episode
from ratectl.training.losses import episode_loss, loss_components, replay_loss

UNIT_TARGET = TargetBudget(minigop_budget=0.4, mean_rate=0.1, distortion_sum=1.0)


def test_target_budget_flat(flat_plant: SyntheticPlant):
    """Pre-encoding constant content at lambda=1024 gives four times the closed-form rate."""
    target = build_target_budget(flat_plant, flat_plant.frames(8, 0), 1024.0, 4)
    assert target.minigop_budget == pytest.approx(0.512, rel=1e-12)
    assert target.mean_rate == pytest.approx(0.128, rel=1e-12)


def test_target_budget_monotone_and_deterministic(plant: SyntheticPlant):
    """Budget grows with the pre-encoding lambda and is repeatable."""
    frames = plant.frames(16, 3)
    low = build_target_budget(plant, frames, 32.0)
    high = build_target_budget(plant, frames, 1024.0)
    assert low.minigop_budget < high.minigop_budget
    assert build_target_budget(plant, frames, 32.0) == low


def test_smoothness_zero():
    """Zero adjustments have no smoothness cost."""
    parts = loss_components(np.array([0.1, 0.1]), np.array([1.0, 1.0]), np.zeros(2), UNIT_TARGET, normalize=False)
    assert parts.smooth == 0.0


def test_smoothness_equal_adjustments():
    """Equal adjustments only pay for leaving the anchor at the first frame."""
    parts = loss_components(np.full(3, 0.1), np.ones(3), np.full(3, 0.2), UNIT_TARGET, normalize=False)
    assert parts.smooth == pytest.approx(0.04)


def test_smoothness_two_frames():
    """Two opposite adjustments."""
    parts = loss_components(np.full(2, 0.1), np.ones(2), np.array([0.1, -0.1]), UNIT_TARGET, normalize=False)
    assert parts.smooth == pytest.approx(0.05)


def test_budget_on_target():
    """Mean rate equal to the target mean rate has no budget cost."""
    parts = loss_components(np.array([0.08, 0.12]), np.ones(2), np.zeros(2), UNIT_TARGET, normalize=False)
    assert parts.budget == pytest.approx(0.0, abs=1e-30)
    assert parts.dist == 2.0


def test_normalization():
    """Normalized terms are relative to the pre-encoded references."""
    target = TargetBudget(0.8, 0.2, 4.0)
    parts = loss_components(np.array([0.3, 0.3]), np.array([1.0, 1.0]), np.zeros(2), target)
    assert parts.dist == pytest.approx(0.5)
    assert parts.budget == pytest.approx(0.25)


def test_total():
    """Total is the weighted sum of the components."""
    assert LossParts(1.0, 2.0, 3.0).total(LossWeights(1.0, 100.0, 10.0)) == pytest.approx(231.0)


def test_loss_weights_check():
    """All-zero or negative loss weights are refused."""
    with pytest.raises(ValueError, match="w_dist"):
        LossWeights(0.0, 0.0, 0.0).check()
    with pytest.raises(ValueError, match="w_budget"):
        LossWeights(1.0, -1.0, 0.0).check()


def test_replay_matches_episode(plant: SyntheticPlant):
    """Replaying a tape with the recording weights reproduces its objective."""
    config = TrainConfig(episode_len=8)
    weights = init_weights(4, zero_head=False)
    tape, target = run_episode(plant, weights, 12, 512.0, config, PiConfig(), BudgetSettings())
    total, _ = episode_loss(tape, target, config.loss)
    assert replay_loss(weights, tape, plant, PiConfig().bounds, target, config.loss) == pytest.approx(total, rel=1e-12)
