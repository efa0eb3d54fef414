"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Mini-GOP budget allocation. Sequence target is turned into mini-GOP budgets which amortize past
deviation over a smoothing window. Remaining budget is split evenly among the frames left in the
mini-GOP. All amounts are bpp-sums, only P-frames are accounted.
"""

import dataclasses
import math
from dataclasses import dataclass

from dataclass_wizard import YAMLWizard
from ratectl.control.pi_controller import ControlException


@dataclass(frozen=True)
class BudgetConfig:
    """Budget allocation parameters of a single target.

    Attributes
    ----------
    target_rate : float
        Sequence target rate R_s.
    smoothing_window : int
        Number of frames over which the accumulated deviation is amortized.
    minigop_len : int
        Number of P-frames sharing one budget.
    r_min : float
        Lower bound of the effective target.
    r_max : float
        Upper bound of the effective target.
    """

    target_rate: float
    smoothing_window: int = 40
    minigop_len: int = 4
    r_min: float = 0.0
    r_max: float = math.inf

    @classmethod
    def from_target(
        cls,
        target_rate: float,
        smoothing_window: int = 40,
        minigop_len: int = 4,
        r_min_ratio: float = 0.125,
        r_max_ratio: float = 8.0,
    ) -> "BudgetConfig":
        """Create configuration whose effective target bounds are proportional to the target rate."""
        return cls(
            target_rate,
            smoothing_window,
            minigop_len,
            target_rate * r_min_ratio,
            target_rate * r_max_ratio,
        )

    def check(self) -> None:
        """Check allocation parameters.

        Raises
        ------
        ValueError
            A parameter is out of its range.
        """

        if not (math.isfinite(self.target_rate) and self.target_rate > 0):
            raise ValueError(f"target_rate: must be a finite positive number, got {self.target_rate}")
        if self.smoothing_window < 1:
            raise ValueError(f"smoothing_window: must be >= 1, got {self.smoothing_window}")
        if self.minigop_len < 1:
            raise ValueError(f"minigop_len: must be >= 1, got {self.minigop_len}")
        if not 0 < self.r_min < self.r_max:
            raise ValueError(f"r_min: must satisfy 0 < r_min < r_max, got {self.r_min}, {self.r_max}")


@dataclass(frozen=True)
class BudgetSettings(YAMLWizard):
    """Target-independent allocation settings, effective target bounds are ratios of the target rate."""

    smoothing_window: int = 40
    minigop_len: int = 4
    r_min_ratio: float = 0.125
    r_max_ratio: float = 8.0

    def check(self) -> None:
        """Check settings.

        Raises
        ------
        ValueError
            A setting is out of its range.
        """

        if self.smoothing_window < 1:
            raise ValueError(f"smoothing_window: must be >= 1, got {self.smoothing_window}")
        if self.minigop_len < 1:
            raise ValueError(f"minigop_len: must be >= 1, got {self.minigop_len}")
        if not 0 < self.r_min_ratio < self.r_max_ratio:
            raise ValueError(f"r_min_ratio: must satisfy 0 < r_min_ratio < r_max_ratio, got {self.r_min_ratio}")

    def for_target(self, target_rate: float) -> BudgetConfig:
        """Allocation parameters of a single target."""
        return BudgetConfig.from_target(
            target_rate, self.smoothing_window, self.minigop_len, self.r_min_ratio, self.r_max_ratio
        )


@dataclass(frozen=True)
class BudgetState:
    """Accounting state of a sequence.

    Attributes
    ----------
    coded_p_frames : int
        Number of coded P-frames.
    accumulated_bits : float
        Rate spent on all coded P-frames.
    minigop_budget : float
        Budget of the current mini-GOP.
    spent_in_minigop : float
        Rate spent within the current mini-GOP.
    frames_left_in_minigop : int
        Frames remaining in the current mini-GOP.
    deviation : float
        Signed deviation from the effective targets accumulated over the whole sequence.
    progress : float
        Position within the current mini-GOP (0.0 - 1.0).
    """

    coded_p_frames: int = 0
    accumulated_bits: float = 0.0
    minigop_budget: float = 0.0
    spent_in_minigop: float = 0.0
    frames_left_in_minigop: int = 0
    deviation: float = 0.0
    progress: float = 1.0


def initial_budget_state() -> BudgetState:
    """Accounting state at the start of a sequence, no mini-GOP opened yet."""
    return BudgetState()


def _progress(cfg: BudgetConfig, frames_left: int) -> float:
    return (cfg.minigop_len - frames_left) / cfg.minigop_len


def open_minigop(cfg: BudgetConfig, state: BudgetState, early_close: bool = False) -> BudgetState:
    """Open a new mini-GOP and compute its budget.

    Budget is ``((R_s * (N_coded + SW) - R_hat) / SW) * N_m``. A nonpositive budget is allowed,
    the effective target is floored later.

    Parameters
    ----------
    cfg : BudgetConfig
        Allocation parameters.
    state : BudgetState
        Current accounting state.
    early_close : bool
        Previous mini-GOP was closed by an I-frame before all its frames were coded.

    Returns
    -------
    BudgetState
        State with a fresh mini-GOP.

    Raises
    ------
    ControlException
        Current mini-GOP still has frames left and it was not closed early.
    """

    if state.frames_left_in_minigop != 0 and not early_close:
        raise ControlException(f"Mini-GOP is still open with {state.frames_left_in_minigop} frames left")

    window = cfg.smoothing_window
    budget = (cfg.target_rate * (state.coded_p_frames + window) - state.accumulated_bits) / window * cfg.minigop_len
    return dataclasses.replace(
        state,
        minigop_budget=budget,
        spent_in_minigop=0.0,
        frames_left_in_minigop=cfg.minigop_len,
        progress=0.0,
    )


def effective_target(cfg: BudgetConfig, state: BudgetState) -> float:
    """Effective target of the next P-frame, the remaining budget split evenly and clipped to [r_min, r_max].

    Raises
    ------
    ControlException
        No frame is left in the current mini-GOP.
    """

    if state.frames_left_in_minigop < 1:
        raise ControlException("No frame left in the current mini-GOP")

    share = (state.minigop_budget - state.spent_in_minigop) / state.frames_left_in_minigop
    return min(max(share, cfg.r_min), cfg.r_max)


def record_p_frame(cfg: BudgetConfig, state: BudgetState, bpp_actual: float, r_eff: float) -> BudgetState:
    """Account a coded P-frame.

    Parameters
    ----------
    cfg : BudgetConfig
        Allocation parameters.
    state : BudgetState
        Current accounting state.
    bpp_actual : float
        Achieved rate of the frame.
    r_eff : float
        Effective target the frame was encoded with.

    Returns
    -------
    BudgetState
        Updated state.

    Raises
    ------
    ControlException
        No frame is left in the current mini-GOP.
    """

    if state.frames_left_in_minigop < 1:
        raise ControlException("No frame left in the current mini-GOP")

    frames_left = state.frames_left_in_minigop - 1
    return BudgetState(
        coded_p_frames=state.coded_p_frames + 1,
        accumulated_bits=state.accumulated_bits + bpp_actual,
        minigop_budget=state.minigop_budget,
        spent_in_minigop=state.spent_in_minigop + bpp_actual,
        frames_left_in_minigop=frames_left,
        deviation=state.deviation + (bpp_actual - r_eff),
        progress=_progress(cfg, frames_left),
    )
