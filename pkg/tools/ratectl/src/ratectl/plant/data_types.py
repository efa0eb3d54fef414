"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Data structures exchanged between codec plants and the control loop.
"""

import math
from dataclasses import dataclass

from dataclass_wizard import YAMLWizard


class PlantException(Exception):
    """General exception raised by codec plants."""


@dataclass(frozen=True)
class FrameContent:
    """Content descriptor of a single frame of a synthetic sequence.

    Attributes
    ----------
    complexity : float
        Multiplicative rate scale of the frame.
    detail : float
        Multiplicative distortion scale of the frame.
    motion_share : float
        Fraction of the frame bits attributed to motion (0.0 - 1.0).
    motion_sparsity : float
        Bounded proxy of the motion sparsity indicator (0.0 - 1.0).
    warp_error : float
        Proxy of the motion-compensation error measured on the warped prediction.
    noise_factor : float
        Multiplicative rate noise, frozen once sampled.
    index : int
        Position of the frame in its sequence.
    """

    complexity: float
    detail: float
    motion_share: float
    motion_sparsity: float
    warp_error: float
    noise_factor: float = 1.0
    index: int = 0

    def check(self) -> None:
        """Check the content invariants.

        Raises
        ------
        ValueError
            A field is out of its range.
        """

        for name in ("complexity", "detail", "warp_error", "noise_factor"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name}: must be a finite positive number, got {value}")
        for name in ("motion_share", "motion_sparsity"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name}: must be in range 0 - 1, got {value}")


@dataclass(frozen=True)
class SyntheticCodecParams(YAMLWizard):
    """Parameters of the differentiable synthetic codec.

    Rate follows ``complexity * base_rate * lambda^gamma * noise`` and distortion follows
    ``detail * base_distortion * lambda^-eta``. The default base rate places lambda=1024
    at 0.128 bpp (1024^0.7 = 2^7).

    Attributes
    ----------
    gamma : float
        Rate-lambda exponent in range (0, 1].
    eta : float
        Distortion-lambda exponent.
    base_rate : float
        Rate at lambda=1 for unit complexity.
    base_distortion : float
        Distortion at lambda=1 for unit detail.
    ar_coeff : float
        AR(1) persistence of the content in log domain, range [0, 1).
    log_noise_sigma : float
        Standard deviation of the log-domain content innovations and of the rate noise.
    iframe_rate : float
        I-frame cost in bpp for unit complexity.
    iframe_distortion : float
        I-frame distortion for unit detail.
    seed : int
        Seed of the content generator.
    """

    gamma: float = 0.7
    eta: float = 0.9
    base_rate: float = 0.001
    base_distortion: float = 0.16
    ar_coeff: float = 0.9
    log_noise_sigma: float = 0.1
    iframe_rate: float = 0.5
    iframe_distortion: float = 3e-4
    seed: int = 0

    def check(self) -> None:
        """Check parameter ranges.

        Raises
        ------
        ValueError
            A parameter is out of its range.
        """

        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma: must be in range (0, 1], got {self.gamma}")
        for name in ("eta", "base_rate", "base_distortion", "iframe_rate", "iframe_distortion"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name}: must be a finite positive number, got {value}")
        if not 0 <= self.ar_coeff < 1:
            raise ValueError(f"ar_coeff: must be in range [0, 1), got {self.ar_coeff}")
        if not (math.isfinite(self.log_noise_sigma) and self.log_noise_sigma >= 0):
            raise ValueError(f"log_noise_sigma: must be nonnegative, got {self.log_noise_sigma}")


@dataclass(frozen=True)
class EncodeResult:
    """Per-frame output of a plant.

    Attributes
    ----------
    bpp_total : float
        Total rate in bits per pixel, always ``bpp_mv + bpp_res``.
    bpp_mv : float
        Rate attributed to motion.
    bpp_res : float
        Rate attributed to the residual.
    distortion : float
        Distortion in mean-squared-error units.
    motion_sparsity : float
        Motion sparsity indicator of the frame (0.0 - 1.0).
    warp_error : float
        Motion-compensation error of the frame.
    d_rate_d_loglambda : float
        Derivative of bpp_total with respect to log lambda (noise held fixed).
    d_dist_d_loglambda : float
        Derivative of distortion with respect to log lambda.
    clamped : bool
        Lambda was outside of the replay grid and has been clamped to its endpoint.
    """

    bpp_total: float
    bpp_mv: float
    bpp_res: float
    distortion: float
    motion_sparsity: float
    warp_error: float
    d_rate_d_loglambda: float = 0.0
    d_dist_d_loglambda: float = 0.0
    clamped: bool = False

    @classmethod
    def from_split(cls, bpp_mv: float, bpp_res: float, **kwargs) -> "EncodeResult":
        """Create result whose total rate is the exact sum of its motion and residual parts."""
        return cls(bpp_total=bpp_mv + bpp_res, bpp_mv=bpp_mv, bpp_res=bpp_res, **kwargs)

    @property
    def psnr(self) -> float:
        """PSNR-equivalent quality in dB with unit reference distortion."""
        return -10.0 * math.log10(self.distortion)
