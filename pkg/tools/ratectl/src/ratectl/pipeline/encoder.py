"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Online encoding loop. Every P-frame goes through mini-GOP budget update, effective target computation,
base control signal update, residual correction prediction and encoding. I-frames are coded with the
fixed-cost I-frame codec and leave the feedback state untouched.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, List, Optional

import numpy as np
from ratectl.control.budget import (
    BudgetConfig,
    effective_target,
    initial_budget_state,
    open_minigop,
    record_p_frame,
)
from ratectl.control.pi_controller import PiConfig, initial_state, log_error, pi_step
from ratectl.controller.features import build_budget_features, build_coding_stats
from ratectl.controller.network import ControllerState, compose_lambda, forward_with_cache, is_saturated
from ratectl.controller.weights import ControllerWeights
from ratectl.pipeline.records import FRAME_KIND_I, FRAME_KIND_P, FrameRecord, PipelineException
from ratectl.pipeline.tape import EpisodeTape, TapeFrame
from ratectl.plant.interface import PlantInterface

MODE_FIXED_LAMBDA = "fixed_lambda"
MODE_PI_ONLY = "pi_only"
MODE_PI_GRU = "pi_gru"
MODES = [MODE_FIXED_LAMBDA, MODE_PI_ONLY, MODE_PI_GRU]


@dataclass(frozen=True)
class SequenceConfig:
    """Parameters of a single encoded sequence.

    Attributes
    ----------
    target_rate : float
        Sequence target rate in bpp.
    mode : str
        One of ``fixed_lambda``, ``pi_only``, ``pi_gru``.
    num_frames : int
        Number of frames.
    gop_size : int
        Distance of I-frames.
    fixed_lambda_value : float, None
        Lambda of the open-loop mode, required iff mode is ``fixed_lambda``.
    """

    target_rate: float
    mode: str = MODE_PI_ONLY
    num_frames: int = 96
    gop_size: int = 32
    fixed_lambda_value: Optional[float] = None

    def check(self) -> None:
        """Check the configuration.

        Raises
        ------
        ValueError
            Configuration is not valid.
        """

        if self.mode not in MODES:
            raise ValueError(f"mode: unknown mode '{self.mode}', expected one of {', '.join(MODES)}")
        if not (math.isfinite(self.target_rate) and self.target_rate > 0):
            raise ValueError(f"target_rate: must be a finite positive number, got {self.target_rate}")
        if self.num_frames < 1:
            raise ValueError(f"num_frames: must be >= 1, got {self.num_frames}")
        if self.gop_size < 2:
            raise ValueError(f"gop_size: must be >= 2, got {self.gop_size}")
        if (self.mode == MODE_FIXED_LAMBDA) != (self.fixed_lambda_value is not None):
            raise ValueError("fixed_lambda_value: required iff mode is fixed_lambda")
        if self.fixed_lambda_value is not None and not self.fixed_lambda_value > 0:
            raise ValueError(f"fixed_lambda_value: must be positive, got {self.fixed_lambda_value}")


def encode_sequence(
    plant: PlantInterface,
    seq_config: SequenceConfig,
    pi_config: PiConfig,
    budget_config: BudgetConfig,
    weights: Optional[ControllerWeights] = None,
    seed: int = 0,
    frames: Optional[List[Any]] = None,
    tape: Optional[EpisodeTape] = None,
) -> List[FrameRecord]:
    """Encode a sequence in closed loop.

    Frame 0 and every gop_size-th frame are I-frames. The PI update of a P-frame uses the error of the
    previous P-frame, the first P-frame of the sequence uses ``lambda_init``. A mini-GOP cut by an
    I-frame is replaced by a fresh one at the next P-frame.

    Parameters
    ----------
    plant : PlantInterface
        Codec plant.
    seq_config : SequenceConfig
        Sequence parameters.
    pi_config : PiConfig
        Base controller configuration.
    budget_config : BudgetConfig
        Budget allocation parameters.
    weights : ControllerWeights, None
        Adjustment controller, required iff mode is ``pi_gru``.
    seed : int
        Sequence seed passed to the plant.
    frames : list, None
        Frames to be encoded instead of the ones produced by the plant for the seed.
    tape : EpisodeTape, None
        Recording of P-frames, filled in when given.

    Returns
    -------
    list
        Frame records in coding order.

    Raises
    ------
    PipelineException
        Configuration is not valid.
    PlantException
        Plant failed to encode a frame.
    """

    try:
        seq_config.check()
        budget_config.check()
        pi_config.check()
    except ValueError as err:
        raise PipelineException(f"Invalid sequence configuration: {err}") from err
    if (seq_config.mode == MODE_PI_GRU) != (weights is not None):
        raise PipelineException("Controller weights are required iff mode is pi_gru")

    if frames is None:
        frames = plant.frames(seq_config.num_frames, seed)
    elif len(frames) < seq_config.num_frames:
        raise PipelineException(f"Sequence has {len(frames)} frames, {seq_config.num_frames} requested")

    bounds = pi_config.bounds
    pi_state = initial_state(pi_config)
    budget = initial_budget_state()
    ctrl_state = ControllerState.zeros()
    if tape is not None:
        tape.initial_state = ctrl_state

    prev_result = None
    prev_rate = None
    pending_error = None
    reopen = False
    minigop = -1
    records = []

    for idx in range(seq_config.num_frames):
        frame = frames[idx]

        if idx % seq_config.gop_size == 0:
            res = plant.encode_iframe(frame)
            records.append(
                FrameRecord(
                    idx,
                    FRAME_KIND_I,
                    np.nan,
                    pi_state.lambda_base,
                    0.0,
                    pi_state.lambda_base,
                    res.bpp_total,
                    res.bpp_mv,
                    res.bpp_res,
                    res.distortion,
                    np.nan,
                    pi_state.integral,
                    budget.deviation,
                    -1,
                    np.nan,
                )
            )
            prev_result = res
            prev_rate = None
            reopen = reopen or budget.frames_left_in_minigop > 0
            continue

        if budget.frames_left_in_minigop == 0 or reopen:
            budget = open_minigop(budget_config, budget, early_close=reopen)
            reopen = False
            minigop += 1
        r_eff = effective_target(budget_config, budget)

        b_feat = c_feat = None
        cache = None
        delta = 0.0
        if seq_config.mode == MODE_FIXED_LAMBDA:
            lambda_base = bounds.clip_lambda(seq_config.fixed_lambda_value)
            lam = lambda_base
        else:
            if pending_error is not None:
                pi_state, _ = pi_step(pi_state, pi_config.gains, bounds, pending_error)
            lambda_base = pi_state.lambda_base
            b_feat = build_budget_features(
                r_eff, r_eff if prev_rate is None else prev_rate, budget, lambda_base, bounds.lambda_max
            )
            c_feat = build_coding_stats(prev_result, r_eff)
            if seq_config.mode == MODE_PI_GRU:
                delta, ctrl_state, cache = forward_with_cache(weights, ctrl_state, b_feat, c_feat)
            lam = compose_lambda(lambda_base, delta, bounds)

        res = plant.encode_frame(frame, lam)
        error = log_error(res.bpp_total, r_eff)
        pending_error = error

        if tape is not None and seq_config.mode != MODE_FIXED_LAMBDA:
            tape.append(
                TapeFrame(
                    idx,
                    frame,
                    r_eff,
                    lambda_base,
                    b_feat,
                    c_feat,
                    delta,
                    lam,
                    is_saturated(lambda_base, delta, bounds),
                    res,
                    cache,
                )
            )

        if seq_config.mode == MODE_FIXED_LAMBDA:
            integral = 0.0
        else:
            integral = float(np.clip(pi_state.integral + error, -bounds.i_max, bounds.i_max))
        minigop_budget = budget.minigop_budget
        budget = record_p_frame(budget_config, budget, res.bpp_total, r_eff)

        records.append(
            FrameRecord(
                idx,
                FRAME_KIND_P,
                r_eff,
                lambda_base,
                delta,
                lam,
                res.bpp_total,
                res.bpp_mv,
                res.bpp_res,
                res.distortion,
                error,
                integral,
                budget.deviation,
                minigop,
                minigop_budget,
            )
        )
        prev_result = res
        prev_rate = res.bpp_total

    logging.getLogger().debug(
        "sequence seed=%d mode=%s target=%g encoded, %d frames",
        seed,
        seq_config.mode,
        seq_config.target_rate,
        seq_config.num_frames,
    )
    return records
