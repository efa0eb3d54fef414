"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Training objective of the adjustment controller and pre-encoding target budgets. Objective combines
reconstruction quality, local budget consistency and smoothness of the control trajectory.
"""

import math
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from dataclass_wizard import YAMLWizard
from ratectl.control.pi_controller import PiBounds
from ratectl.controller.network import compose_lambda, forward_with_cache
from ratectl.controller.weights import ControllerWeights
from ratectl.pipeline.tape import EpisodeTape
from ratectl.plant.interface import PlantInterface


class TrainingException(Exception):
    """Training cannot continue.

    Attributes
    ----------
    seed : int, None
        Seed of the episode which caused the failure.
    """

    def __init__(self, message: str, seed: Optional[int] = None) -> None:
        super().__init__(message)
        self.seed = seed


@dataclass(frozen=True)
class LossWeights(YAMLWizard):
    """Weights of the objective components."""

    w_dist: float = 1.0
    w_budget: float = 100.0
    w_smooth: float = 10.0

    def check(self) -> None:
        """Check weights.

        Raises
        ------
        ValueError
            A weight is negative or all weights are zero.
        """

        for name in ("w_dist", "w_budget", "w_smooth"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name}: must be >= 0, got {value}")
        if self.w_dist == 0 and self.w_budget == 0 and self.w_smooth == 0:
            raise ValueError("w_dist: at least one loss weight must be positive")


@dataclass(frozen=True)
class TargetBudget:
    """Reachable target obtained by pre-encoding an episode with a fixed lambda.

    Attributes
    ----------
    minigop_budget : float
        Budget of a mini-GOP, mean pre-encoded rate times mini-GOP length.
    mean_rate : float
        Mean pre-encoded P-frame rate.
    distortion_sum : float
        Sum of pre-encoded distortions, reference scale of the distortion term.
    """

    minigop_budget: float
    mean_rate: float
    distortion_sum: float


@dataclass(frozen=True)
class LossParts:
    """Unweighted objective components."""

    dist: float
    budget: float
    smooth: float

    def total(self, weights: LossWeights) -> float:
        """Weighted sum of the components."""
        return weights.w_dist * self.dist + weights.w_budget * self.budget + weights.w_smooth * self.smooth


def build_target_budget(
    plant: PlantInterface, frames: Sequence[Any], lambda_pre: float, minigop_len: int = 4
) -> TargetBudget:
    """Pre-encode P-frames of an episode with a fixed lambda using the frozen plant.

    Parameters
    ----------
    plant : PlantInterface
        Frozen plant.
    frames : list
        P-frames of the episode.
    lambda_pre : float
        Pre-encoding lambda.
    minigop_len : int
        Mini-GOP length.

    Returns
    -------
    TargetBudget
        Target reachable by the plant.
    """

    results = [plant.encode_frame(frame, lambda_pre) for frame in frames]
    mean_rate = float(np.mean([res.bpp_total for res in results]))
    return TargetBudget(mean_rate * minigop_len, mean_rate, float(sum(res.distortion for res in results)))


def loss_components(
    rates: np.ndarray, distortions: np.ndarray, deltas: np.ndarray, target: TargetBudget, normalize: bool = True
) -> LossParts:
    """Objective components of an episode.

    Distortion is the sum of frame distortions, budget term is the squared difference of the mean
    rate and the target mean rate, smoothness is the sum of squared differences of consecutive
    adjustments with the adjustment before the episode defined as zero. With ``normalize`` the
    distortion is divided by the pre-encoded distortion sum and the rate difference by the target rate.
    """

    dist_ref = target.distortion_sum if normalize else 1.0
    rate_ref = target.mean_rate if normalize else 1.0
    steps = np.diff(np.concatenate([[0.0], deltas]))
    return LossParts(
        float(np.sum(distortions) / dist_ref),
        float(((np.mean(rates) - target.mean_rate) / rate_ref) ** 2),
        float(np.sum(steps * steps)),
    )


def episode_loss(
    tape: EpisodeTape, target: TargetBudget, weights: LossWeights, normalize: bool = True
) -> Tuple[float, LossParts]:
    """Objective of a recorded episode.

    Parameters
    ----------
    tape : EpisodeTape
        Recorded P-frames.
    target : TargetBudget
        Pre-encoding target.
    weights : LossWeights
        Weights of the components.
    normalize : bool
        Scale distortion and rate terms by the pre-encoded references.

    Returns
    -------
    tuple
        Total loss and its unweighted components.

    Raises
    ------
    TrainingException
        Tape is empty.
    """

    if not tape.frames:
        raise TrainingException("Episode tape contains no P-frame")

    parts = loss_components(
        np.array([frame.result.bpp_total for frame in tape.frames]),
        np.array([frame.result.distortion for frame in tape.frames]),
        tape.deltas,
        target,
        normalize,
    )
    return parts.total(weights), parts


def replay_loss(
    controller: ControllerWeights,
    tape: EpisodeTape,
    plant: PlantInterface,
    bounds: PiBounds,
    target: TargetBudget,
    weights: LossWeights,
    normalize: bool = True,
) -> float:
    """Objective of an episode replayed with different controller weights.

    Features and base control signals are taken from the tape, only the controller and the plant are
    evaluated again. Gradient of this function is what ``episode_backward`` computes.
    """

    state = tape.initial_state
    rates: List[float] = []
    distortions: List[float] = []
    deltas: List[float] = []
    for frame in tape.frames:
        delta, state, _ = forward_with_cache(controller, state, frame.budget_features, frame.coding_stats)
        res = plant.encode_frame(frame.content, compose_lambda(frame.lambda_base, delta, bounds))
        rates.append(res.bpp_total)
        distortions.append(res.distortion)
        deltas.append(delta)

    parts = loss_components(np.array(rates), np.array(distortions), np.array(deltas), target, normalize)
    return parts.total(weights)
