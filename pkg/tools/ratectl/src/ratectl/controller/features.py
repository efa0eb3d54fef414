"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Strictly causal input features of the adjustment controller. Budget-state features describe where
the encoder stands with respect to its allocation, coding statistics describe the previously coded
frame. No quantity of the frame being encoded is an input.
"""

import math

import numpy as np
from ratectl.control.budget import BudgetState
from ratectl.plant.data_types import EncodeResult

# Floor of every log argument and ratio denominator.
EPS = 1e-9

BUDGET_FEATURES = 5
CODING_STATS = 4


def build_budget_features(
    r_eff: float, prev_rate: float, budget_state: BudgetState, lambda_base: float, lambda_max: float
) -> np.ndarray:
    """Build budget-state features.

    Parameters
    ----------
    r_eff : float
        Effective target of the current frame.
    prev_rate : float
        Rate of the previously coded frame (the effective target itself after an I-frame).
    budget_state : BudgetState
        Accounting state before the current frame is encoded.
    lambda_base : float
        Base control signal of the current frame.
    lambda_max : float
        Upper control bound.

    Returns
    -------
    np.ndarray
        ``[log r_eff, log(prev_rate / r_eff), E / r_eff, progress, log(lambda_base / lambda_max)]``
    """

    r_eff = max(r_eff, EPS)
    return np.array(
        [
            math.log(r_eff),
            math.log(max(prev_rate, EPS) / r_eff),
            budget_state.deviation / r_eff,
            budget_state.progress,
            math.log(max(lambda_base, EPS) / lambda_max),
        ],
        dtype=np.float64,
    )


def build_coding_stats(prev: EncodeResult, r_eff: float) -> np.ndarray:
    """Build coding statistics of the previously coded frame relative to the current effective target.

    Parameters
    ----------
    prev : EncodeResult
        Result of the previously coded frame (I-frame result after an I-frame).
    r_eff : float
        Effective target of the current frame.

    Returns
    -------
    np.ndarray
        ``[bpp_mv / r_eff, bpp_res / r_eff, motion_sparsity, log warp_error]``
    """

    r_eff = max(r_eff, EPS)
    return np.array(
        [prev.bpp_mv / r_eff, prev.bpp_res / r_eff, prev.motion_sparsity, math.log(max(prev.warp_error, EPS))],
        dtype=np.float64,
    )
