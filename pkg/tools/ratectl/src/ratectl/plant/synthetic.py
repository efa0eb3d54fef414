"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Differentiable synthetic codec. Content evolves as a log-domain AR(1) process, rate and distortion
follow power laws in lambda, so the closed loop is linear in the log domain.
"""

import dataclasses
import logging
import math
from typing import List

import numpy as np
from ratectl.plant.data_types import EncodeResult, FrameContent, PlantException, SyntheticCodecParams
from ratectl.plant.interface import PlantInterface
from scipy.special import expit

# Motion share of a frame with unit complexity.
MOTION_SHARE_LOGIT = math.log(0.25 / 0.75)


def synth_sequence(params: SyntheticCodecParams, num_frames: int) -> List[FrameContent]:
    """Generate content of a synthetic sequence.

    Log complexity and log detail follow independent AR(1) processes
    ``x_t = ar_coeff * x_{t-1} + innovation`` around zero, started from their stationary
    distribution. Innovations and the frozen rate noise have standard deviation
    ``log_noise_sigma``. Motion statistics are smooth functions of the content plus seeded noise.

    Parameters
    ----------
    params : SyntheticCodecParams
        Codec parameters, the sequence is fully determined by ``params.seed``.
    num_frames : int
        Number of frames to generate.

    Returns
    -------
    list
        Content of individual frames.

    Raises
    ------
    PlantException
        Number of frames is not positive or the noise level drives the content out of its range.
    """

    if num_frames < 1:
        raise PlantException(f"Number of frames must be positive, got {num_frames}")

    rng = np.random.default_rng(params.seed)
    eps = rng.standard_normal((num_frames, 6))
    sigma = params.log_noise_sigma
    coeff = params.ar_coeff

    log_c = np.empty(num_frames)
    log_d = np.empty(num_frames)
    stationary = sigma / math.sqrt(1.0 - coeff * coeff)
    log_c[0] = stationary * eps[0, 0]
    log_d[0] = stationary * eps[0, 1]
    for t in range(1, num_frames):
        log_c[t] = coeff * log_c[t - 1] + sigma * eps[t, 0]
        log_d[t] = coeff * log_d[t - 1] + sigma * eps[t, 1]

    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        complexity = np.exp(log_c)
        detail = np.exp(log_d)
        noise = np.exp(sigma * eps[:, 2])
        motion_share = expit(MOTION_SHARE_LOGIT + 0.5 * log_c + 0.5 * sigma * eps[:, 3])
        motion_sparsity = expit(-1.5 * log_c + sigma * eps[:, 4])
        # warp error follows the detail/complexity balance of the frame
        warp_error = np.exp(0.8 * (log_d - log_c) + 0.5 * sigma * eps[:, 5])

    frames = [
        FrameContent(
            complexity=float(complexity[t]),
            detail=float(detail[t]),
            motion_share=float(motion_share[t]),
            motion_sparsity=float(motion_sparsity[t]),
            warp_error=float(warp_error[t]),
            noise_factor=float(noise[t]),
            index=t,
        )
        for t in range(num_frames)
    ]

    for frame in frames:
        try:
            frame.check()
        except ValueError as err:
            raise PlantException(f"Frame {frame.index} of sequence {params.seed}: {err}") from err
    return frames


class SyntheticPlant(PlantInterface):
    """Synthetic codec with analytic derivatives.

    Attributes
    ----------
    params : SyntheticCodecParams
        Frozen codec parameters.
    """

    NAME = "synthetic"

    def __init__(self, params: SyntheticCodecParams) -> None:
        """Validate parameters and initialize the plant.

        Parameters
        ----------
        params : SyntheticCodecParams
            Codec parameters.

        Raises
        ------
        PlantException
            Parameters are not valid.
        """

        try:
            params.check()
        except ValueError as err:
            raise PlantException(f"Invalid synthetic codec parameters: {err}") from err

        self.params = params
        logging.getLogger().debug("synthetic plant initialized with %s", params)

    @classmethod
    def from_config(cls, cfg) -> "SyntheticPlant":
        return cls(cfg.synthetic)

    def frames(self, num_frames: int, seed: int) -> List[FrameContent]:
        return synth_sequence(self._params_with_seed(seed), num_frames)

    def encode_frame(self, frame: FrameContent, lam: float) -> EncodeResult:
        if not (math.isfinite(lam) and lam > 0):
            raise PlantException(f"Lambda must be a finite positive number, got {lam}")

        params = self.params
        rate = frame.complexity * params.base_rate * lam**params.gamma * frame.noise_factor
        bpp_mv = frame.motion_share * rate
        bpp_res = (1.0 - frame.motion_share) * rate
        bpp_total = bpp_mv + bpp_res
        distortion = frame.detail * params.base_distortion * lam ** (-params.eta)

        # derivatives in log lambda of c * exp(gamma * log lambda) and d * exp(-eta * log lambda)
        return EncodeResult(
            bpp_total=bpp_total,
            bpp_mv=bpp_mv,
            bpp_res=bpp_res,
            distortion=distortion,
            motion_sparsity=frame.motion_sparsity,
            warp_error=frame.warp_error,
            d_rate_d_loglambda=params.gamma * bpp_total,
            d_dist_d_loglambda=-params.eta * distortion,
        )

    def encode_iframe(self, frame: FrameContent) -> EncodeResult:
        params = self.params
        return EncodeResult.from_split(
            0.0,
            params.iframe_rate * frame.complexity,
            distortion=params.iframe_distortion * frame.detail,
            motion_sparsity=frame.motion_sparsity,
            warp_error=frame.warp_error,
        )

    def nominal_lambda(self, rate: float, lambda_min: float, lambda_max: float) -> float:
        if rate <= 0:
            raise PlantException(f"Rate must be positive, got {rate}")

        lam = (rate / self.params.base_rate) ** (1.0 / self.params.gamma)
        return min(max(lam, lambda_min), lambda_max)

    def _params_with_seed(self, seed: int) -> SyntheticCodecParams:
        return dataclasses.replace(self.params, seed=seed)
