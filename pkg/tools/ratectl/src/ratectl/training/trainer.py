"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Controller-only training. The plant is frozen, every episode gets a reachable target by pre-encoding
its frames with a lambda sampled from a predefined set, the full online loop is run with the controller
active and the controller is updated by Adam with a step learning-rate schedule.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from dataclass_wizard import YAMLWizard
from ratectl.control.budget import BudgetSettings
from ratectl.control.pi_controller import PiConfig
from ratectl.controller.weights import ControllerWeights, init_weights
from ratectl.pipeline.encoder import MODE_PI_GRU, MODE_PI_ONLY, SequenceConfig, encode_sequence
from ratectl.pipeline.tape import EpisodeTape
from ratectl.plant.interface import PlantInterface
from ratectl.training.adam import AdamState, adam_step, step_lr
from ratectl.training.backprop import episode_backward
from ratectl.training.losses import (
    LossParts,
    LossWeights,
    TargetBudget,
    TrainingException,
    build_target_budget,
    episode_loss,
)

TRAIN_LOG_COLUMNS = ["epoch", "split", "loss_total", "loss_dist", "loss_budget", "loss_smooth", "lr"]


# pylint: disable=too-many-instance-attributes
@dataclass(frozen=True)
class TrainConfig(YAMLWizard):
    """Training parameters.

    Attributes
    ----------
    learning_rate : float
        Initial Adam step size.
    batch_size : int
        Episodes per optimizer step.
    epochs : int
        Number of passes over the training seeds.
    lr_step : int
        Number of epochs between learning-rate decays.
    lr_gamma : float
        Learning-rate decay factor.
    lambda_pre_set : list
        Lambdas the pre-encoding lambda is sampled from.
    episode_len : int
        Number of P-frames of an episode (preceded by one I-frame).
    seed : int
        Seed of weight initialization and episode sampling.
    corpus_size : int
        Number of synthetic sequences of the corpus.
    validation_fraction : float
        Fraction of corpus seeds held out for validation.
    delta_max : float
        Output bound of the trained controller.
    loss : LossWeights
        Weights of the objective components.
    """

    learning_rate: float = 1e-4
    batch_size: int = 4
    epochs: int = 20
    lr_step: int = 5
    lr_gamma: float = 0.5
    lambda_pre_set: List[float] = field(default_factory=lambda: [128.0, 256.0, 512.0, 1024.0, 2048.0])
    episode_len: int = 16
    seed: int = 0
    corpus_size: int = 40
    validation_fraction: float = 0.2
    delta_max: float = 0.2
    loss: LossWeights = field(default_factory=LossWeights)

    def check(self) -> None:
        """Check parameters.

        Raises
        ------
        ValueError
            A parameter is out of its range.
        """

        if not (math.isfinite(self.learning_rate) and self.learning_rate > 0):
            raise ValueError(f"learning_rate: must be > 0, got {self.learning_rate}")
        for name, minimum in (("batch_size", 1), ("epochs", 0), ("lr_step", 1), ("episode_len", 1), ("corpus_size", 1)):
            if getattr(self, name) < minimum:
                raise ValueError(f"{name}: must be >= {minimum}, got {getattr(self, name)}")
        if not 0 < self.lr_gamma <= 1:
            raise ValueError(f"lr_gamma: must be in range (0, 1], got {self.lr_gamma}")
        if not self.lambda_pre_set or any(not lam > 0 for lam in self.lambda_pre_set):
            raise ValueError("lambda_pre_set: must be a nonempty list of positive numbers")
        if not 0 <= self.validation_fraction < 1:
            raise ValueError(f"validation_fraction: must be in range [0, 1), got {self.validation_fraction}")
        if not (math.isfinite(self.delta_max) and self.delta_max > 0):
            raise ValueError(f"delta_max: must be > 0, got {self.delta_max}")
        try:
            self.loss.check()
        except ValueError as err:
            raise ValueError(f"loss.{err}") from err


def split_corpus(seeds: Sequence[int], validation_fraction: float) -> Tuple[List[int], List[int]]:
    """Split corpus seeds into training and held-out validation seeds.

    The last ``round(len(seeds) * validation_fraction)`` seeds are held out. Without held-out seeds,
    training seeds are used for validation.
    """

    held_out = int(round(len(seeds) * validation_fraction))
    held_out = min(held_out, len(seeds) - 1)
    if held_out <= 0:
        return list(seeds), list(seeds)
    return list(seeds[:-held_out]), list(seeds[-held_out:])


def validation_lambda(config: TrainConfig, seed: int) -> float:
    """Pre-encoding lambda of a validation episode, fixed per seed."""
    rng = np.random.default_rng((config.seed, seed))
    return float(config.lambda_pre_set[int(rng.integers(len(config.lambda_pre_set)))])


def run_episode(
    plant: PlantInterface,
    weights: Optional[ControllerWeights],
    seed: int,
    lambda_pre: float,
    config: TrainConfig,
    pi_config: PiConfig,
    budget: BudgetSettings,
) -> Tuple[EpisodeTape, TargetBudget]:
    """Encode a single episode and record it.

    Episode is one I-frame followed by ``episode_len`` P-frames of a seeded sequence. Target rate
    is the pre-encoded mean rate and the base controller starts at the pre-encoding lambda.

    Parameters
    ----------
    plant : PlantInterface
        Frozen plant.
    weights : ControllerWeights, None
        Controller weights, None runs the base controller alone.
    seed : int
        Sequence seed.
    lambda_pre : float
        Pre-encoding lambda.
    config : TrainConfig
        Training parameters.
    pi_config : PiConfig
        Base controller configuration.
    budget : BudgetSettings
        Budget allocation settings.

    Returns
    -------
    tuple
        Recorded tape and the pre-encoding target.
    """

    num_frames = config.episode_len + 1
    frames = plant.frames(num_frames, seed)
    target = build_target_budget(plant, frames[1:], lambda_pre, budget.minigop_len)

    seq_config = SequenceConfig(
        target.mean_rate, MODE_PI_ONLY if weights is None else MODE_PI_GRU, num_frames, num_frames
    )
    tape = EpisodeTape()
    encode_sequence(
        plant,
        seq_config,
        dataclasses.replace(pi_config, lambda_init=lambda_pre),
        budget.for_target(target.mean_rate),
        weights,
        seed,
        frames,
        tape,
    )
    return tape, target


def _mean_parts(parts: List[LossParts]) -> LossParts:
    return LossParts(
        float(np.mean([part.dist for part in parts])),
        float(np.mean([part.budget for part in parts])),
        float(np.mean([part.smooth for part in parts])),
    )


def evaluate(
    plant: PlantInterface,
    weights: Optional[ControllerWeights],
    seeds: Sequence[int],
    config: TrainConfig,
    pi_config: PiConfig,
    budget: BudgetSettings,
) -> LossParts:
    """Mean objective components over validation episodes, None weights evaluate the zero-adjustment baseline."""

    parts = []
    for seed in seeds:
        tape, target = run_episode(plant, weights, seed, validation_lambda(config, seed), config, pi_config, budget)
        parts.append(episode_loss(tape, target, config.loss)[1])
    return _mean_parts(parts)


def _log_row(epoch: int, split: str, parts: LossParts, config: TrainConfig, learning_rate: float) -> dict:
    logging.getLogger().info(
        "epoch=%d split=%s loss=%.6g (dist=%.6g budget=%.6g smooth=%.6g) lr=%g",
        epoch,
        split,
        parts.total(config.loss),
        parts.dist,
        parts.budget,
        parts.smooth,
        learning_rate,
    )
    return {
        "epoch": epoch,
        "split": split,
        "loss_total": parts.total(config.loss),
        "loss_dist": parts.dist,
        "loss_budget": parts.budget,
        "loss_smooth": parts.smooth,
        "lr": learning_rate,
    }


# pylint: disable=too-many-locals
def train(
    plant: PlantInterface,
    config: TrainConfig,
    corpus: Sequence[int],
    pi_config: PiConfig,
    budget: BudgetSettings,
    weights: Optional[ControllerWeights] = None,
) -> Tuple[ControllerWeights, pd.DataFrame]:
    """Train the adjustment controller.

    Weights with the lowest validation loss are returned, weights before the first step included.
    Training log starts with the zero-adjustment baseline and the initial weights (epoch -1), followed
    by training and validation losses of every epoch.

    Parameters
    ----------
    plant : PlantInterface
        Frozen plant.
    config : TrainConfig
        Training parameters.
    corpus : list
        Sequence seeds.
    pi_config : PiConfig
        Base controller configuration.
    budget : BudgetSettings
        Budget allocation settings.
    weights : ControllerWeights, None
        Initial weights, initialized from the training seed when not given.

    Returns
    -------
    tuple
        Trained weights and the training log.

    Raises
    ------
    TrainingException
        Invalid setup or a non-finite loss or gradient (the exception carries the episode seed).
    """

    if not corpus:
        raise TrainingException("Training corpus is empty")
    bounds = pi_config.bounds
    if any(not bounds.lambda_min <= lam <= bounds.lambda_max for lam in config.lambda_pre_set):
        raise TrainingException("Pre-encoding lambdas must lie within lambda bounds")
    if config.episode_len < budget.minigop_len:
        raise TrainingException(f"Episode must contain at least one mini-GOP ({budget.minigop_len} frames)")

    if weights is None:
        weights = init_weights(config.seed, config.delta_max)
    train_seeds, val_seeds = split_corpus(corpus, config.validation_fraction)
    logging.getLogger().info("training on %d sequences, validating on %d", len(train_seeds), len(val_seeds))

    rows = [
        _log_row(-1, "baseline", evaluate(plant, None, val_seeds, config, pi_config, budget), config, 0.0),
    ]
    best = evaluate(plant, weights, val_seeds, config, pi_config, budget)
    rows.append(_log_row(-1, "initial", best, config, 0.0))
    best_loss = best.total(config.loss)
    best_weights = weights.copy()

    rng = np.random.default_rng(config.seed)
    adam = AdamState.zeros(weights)
    for epoch in range(config.epochs):
        learning_rate = step_lr(config.learning_rate, epoch, config.lr_step, config.lr_gamma)
        order = [train_seeds[idx] for idx in rng.permutation(len(train_seeds))]
        epoch_parts = []

        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            grads = weights.zeros_like()
            for seed in batch:
                lambda_pre = float(config.lambda_pre_set[int(rng.integers(len(config.lambda_pre_set)))])
                tape, target = run_episode(plant, weights, seed, lambda_pre, config, pi_config, budget)
                total, parts = episode_loss(tape, target, config.loss)
                if not math.isfinite(total):
                    raise TrainingException(f"Loss diverged in episode of sequence {seed}: {total}", seed)
                episode_grads = episode_backward(tape, target, config.loss, weights)
                for name, grad in episode_grads.items():
                    if not np.all(np.isfinite(grad)):
                        raise TrainingException(f"Gradient of {name} diverged in episode of sequence {seed}", seed)
                    grads[name] += grad / len(batch)
                epoch_parts.append(parts)
            weights, adam = adam_step(weights, adam, grads, learning_rate)

        rows.append(_log_row(epoch, "train", _mean_parts(epoch_parts), config, learning_rate))
        validation = evaluate(plant, weights, val_seeds, config, pi_config, budget)
        rows.append(_log_row(epoch, "validation", validation, config, learning_rate))
        if validation.total(config.loss) < best_loss:
            best_loss = validation.total(config.loss)
            best_weights = weights.copy()

    return best_weights, pd.DataFrame(rows, columns=TRAIN_LOG_COLUMNS)


def write_train_log(log: pd.DataFrame, path: str) -> None:
    """Store training log as CSV.

    Raises
    ------
    TrainingException
        Unable to write the file.
    """

    try:
        log.to_csv(path, index=False, encoding="utf-8")
    except OSError as err:
        raise TrainingException(f"Unable to write training log: {path}") from err
    logging.getLogger().info("%d training log rows written to %s", len(log.index), path)
