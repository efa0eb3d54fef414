"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Adam optimizer over named controller tensors and the step learning-rate schedule.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from ratectl.controller.weights import ControllerWeights

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


@dataclass
class AdamState:
    """First and second moment estimates and the number of performed steps."""

    m: Dict[str, np.ndarray]
    v: Dict[str, np.ndarray]
    step: int = 0

    @classmethod
    def zeros(cls, weights: ControllerWeights) -> "AdamState":
        """Optimizer state before the first step."""
        return cls(weights.zeros_like(), weights.zeros_like(), 0)


def adam_step(
    weights: ControllerWeights,
    state: AdamState,
    gradients: Dict[str, np.ndarray],
    learning_rate: float,
    beta1: float = BETA1,
    beta2: float = BETA2,
    epsilon: float = EPSILON,
) -> Tuple[ControllerWeights, AdamState]:
    """Single bias-corrected Adam update. Inputs are left untouched.

    Parameters
    ----------
    weights : ControllerWeights
        Current weights.
    state : AdamState
        Current optimizer state.
    gradients : dict
        Gradient of every tensor.
    learning_rate : float
        Step size.
    beta1, beta2 : float
        Decay rates of the moment estimates.
    epsilon : float
        Denominator offset.

    Returns
    -------
    tuple
        Updated weights and optimizer state.
    """

    step = state.step + 1
    new_weights = weights.copy()
    new_m = {}
    new_v = {}
    for name, grad in gradients.items():
        new_m[name] = beta1 * state.m[name] + (1.0 - beta1) * grad
        new_v[name] = beta2 * state.v[name] + (1.0 - beta2) * grad * grad
        m_hat = new_m[name] / (1.0 - beta1**step)
        v_hat = new_v[name] / (1.0 - beta2**step)
        new_weights.tensors[name] -= learning_rate * m_hat / (np.sqrt(v_hat) + epsilon)

    return new_weights, AdamState(new_m, new_v, step)


def step_lr(learning_rate: float, epoch: int, lr_step: int, lr_gamma: float) -> float:
    """Learning rate of a (0-based) epoch, multiplied by lr_gamma every lr_step epochs."""
    return learning_rate * lr_gamma ** (epoch // lr_step)
