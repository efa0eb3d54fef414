"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Recording of the P-frames of an encoded episode. Holds everything needed to replay the controller
forward pass and to run the reverse pass.
"""

from dataclasses import dataclass, field
from typing import Any, List, Optional

import numpy as np
from ratectl.controller.network import ControllerState, ForwardCache
from ratectl.plant.data_types import EncodeResult


@dataclass(frozen=True)
class TapeFrame:
    """Single recorded P-frame.

    Attributes
    ----------
    index : int
        Frame index within the sequence.
    content : Any
        Plant frame, re-encoded when the episode is replayed.
    r_eff : float
        Effective target.
    lambda_base : float
        Base control signal, treated as a constant by the reverse pass.
    budget_features : np.ndarray
        Budget-state features fed to the controller.
    coding_stats : np.ndarray
        Coding statistics fed to the controller.
    delta : float
        Residual adjustment, zero when no controller is active.
    lambda_final : float
        Lambda the frame was encoded with.
    saturated : bool
        Composed lambda was clipped to the control bounds.
    result : EncodeResult
        Plant output including derivatives.
    cache : ForwardCache, None
        Intermediate values of the controller step, None when no controller is active.
    """

    index: int
    content: Any
    r_eff: float
    lambda_base: float
    budget_features: np.ndarray
    coding_stats: np.ndarray
    delta: float
    lambda_final: float
    saturated: bool
    result: EncodeResult
    cache: Optional[ForwardCache] = None


@dataclass
class EpisodeTape:
    """P-frames of an episode in coding order together with the controller state the episode started with."""

    initial_state: ControllerState = field(default_factory=ControllerState.zeros)
    frames: List[TapeFrame] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.frames)

    def append(self, frame: TapeFrame) -> None:
        """Record a P-frame."""
        self.frames.append(frame)

    @property
    def deltas(self) -> np.ndarray:
        """Residual adjustments of the recorded frames."""
        return np.array([frame.delta for frame in self.frames], dtype=np.float64)
