"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Comparison of the analytic reverse pass with central finite differences of the replayed episode.
"""

import logging
from typing import Callable, Dict

import numpy as np
from ratectl.control.pi_controller import PiBounds
from ratectl.controller.weights import ControllerWeights
from ratectl.pipeline.tape import EpisodeTape
from ratectl.plant.interface import PlantInterface
from ratectl.training.backprop import episode_backward
from ratectl.training.losses import LossWeights, TargetBudget, replay_loss

FD_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-4
# Norms below this value are treated as zero gradients.
NORM_FLOOR = 1e-8


class GradCheckException(Exception):
    """Analytic gradient does not match finite differences."""


# pylint: disable=too-many-arguments,too-many-locals
def gradient_check(
    plant: PlantInterface,
    controller: ControllerWeights,
    tape: EpisodeTape,
    bounds: PiBounds,
    target: TargetBudget,
    weights: LossWeights,
    samples: int = 8,
    step: float = FD_STEP,
    seed: int = 0,
    backward: Callable[..., Dict[str, np.ndarray]] = episode_backward,
) -> Dict[str, float]:
    """Relative error of analytic gradients per tensor.

    For every tensor ``samples`` randomly chosen entries are perturbed by +-step and the replayed
    loss is differentiated numerically. Error of a tensor is
    ``|g_analytic - g_numeric| / (|g_analytic| + |g_numeric|)`` over the sampled entries.

    Parameters
    ----------
    plant : PlantInterface
        Frozen plant the tape was recorded with.
    controller : ControllerWeights
        Weights the tape was recorded with.
    tape : EpisodeTape
        Episode recorded with the controller active.
    bounds : PiBounds
        Control bounds of the episode.
    target : TargetBudget
        Pre-encoding target of the episode.
    weights : LossWeights
        Weights of the objective components.
    samples : int
        Number of sampled entries per tensor.
    step : float
        Finite-difference step.
    seed : int
        Seed of entry sampling.
    backward : callable
        Reverse pass to be checked.

    Returns
    -------
    dict
        Relative error keyed by the tensor name.
    """

    analytic = backward(tape, target, weights, controller)
    perturbed = controller.copy()
    rng = np.random.default_rng(seed)

    errors = {}
    for name, tensor in perturbed.tensors.items():
        entries = rng.choice(tensor.size, size=min(samples, tensor.size), replace=False)
        numeric = np.empty(len(entries))
        for pos, entry in enumerate(entries):
            original = tensor.flat[entry]
            tensor.flat[entry] = original + step
            loss_plus = replay_loss(perturbed, tape, plant, bounds, target, weights)
            tensor.flat[entry] = original - step
            loss_minus = replay_loss(perturbed, tape, plant, bounds, target, weights)
            tensor.flat[entry] = original
            numeric[pos] = (loss_plus - loss_minus) / (2.0 * step)

        exact = analytic[name].flat[entries]
        scale = np.linalg.norm(exact) + np.linalg.norm(numeric)
        errors[name] = float(np.linalg.norm(exact - numeric) / scale) if scale > NORM_FLOOR else 0.0
        logging.getLogger().debug("gradient check %s: relative error %.3e", name, errors[name])

    return errors


def assert_gradients(errors: Dict[str, float], tolerance: float = DEFAULT_TOLERANCE) -> None:
    """Check errors of a gradient check against the tolerance.

    Raises
    ------
    GradCheckException
        Error of some tensor exceeds the tolerance, the message names the worst tensor.
    """

    worst = max(errors, key=errors.get)
    if errors[worst] >= tolerance:
        raise GradCheckException(
            f"Gradient check failed: tensor {worst} has relative error {errors[worst]:.3e} (tolerance {tolerance:g})"
        )
