"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Log-domain PI/PID feedback law producing the base control signal lambda_base. The controller acts on
the logarithm of the rate error and updates lambda multiplicatively, with anti-windup clipping of the
integral term and a per-frame bound on the update magnitude.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from dataclass_wizard import YAMLWizard


class ControlException(Exception):
    """Contract violation of a control law."""


@dataclass(frozen=True)
class PiGains(YAMLWizard):
    """Gains of the PID law. Derivative gain defaults to zero (PI configuration)."""

    kp: float = 0.9
    ki: float = 0.05
    kd: float = 0.0

    def check(self) -> None:
        """Check gains.

        Raises
        ------
        ValueError
            A gain is negative or all gains are zero.
        """

        for name in ("kp", "ki", "kd"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name}: must be >= 0, got {value}")
        if self.kp == 0 and self.ki == 0 and self.kd == 0:
            raise ValueError("kp: at least one gain must be positive")


@dataclass(frozen=True)
class PiBounds(YAMLWizard):
    """Control bounds.

    Attributes
    ----------
    lambda_min : float
        Lower bound of lambda.
    lambda_max : float
        Upper bound of lambda.
    i_max : float
        Anti-windup bound of the integral term.
    delta_max : float
        Bound of a single log-domain update.
    """

    lambda_min: float = 32.0
    lambda_max: float = 4096.0
    i_max: float = 10.0
    delta_max: float = 0.30

    def check(self) -> None:
        """Check bounds.

        Raises
        ------
        ValueError
            Bounds are inconsistent.
        """

        for name in ("lambda_min", "lambda_max", "i_max", "delta_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name}: must be a finite positive number, got {value}")
        if self.lambda_min >= self.lambda_max:
            raise ValueError(f"lambda_min: must be lower than lambda_max ({self.lambda_min} >= {self.lambda_max})")

    def clip_lambda(self, lam: float) -> float:
        """Clip lambda into the control range."""
        return min(max(lam, self.lambda_min), self.lambda_max)


@dataclass(frozen=True)
class PiConfig(YAMLWizard):
    """Configuration of the base controller."""

    gains: PiGains = field(default_factory=PiGains)
    bounds: PiBounds = field(default_factory=PiBounds)
    lambda_init: float = 1024.0

    def check(self) -> None:
        """Check the configuration, error messages are prefixed with the failing subsection.

        Raises
        ------
        ValueError
            Configuration is not valid.
        """

        try:
            self.gains.check()
        except ValueError as err:
            raise ValueError(f"gains.{err}") from err
        try:
            self.bounds.check()
        except ValueError as err:
            raise ValueError(f"bounds.{err}") from err
        if not self.bounds.lambda_min <= self.lambda_init <= self.bounds.lambda_max:
            raise ValueError(f"lambda_init: must be within lambda bounds, got {self.lambda_init}")


@dataclass(frozen=True)
class PiState:
    """Mutable state of the feedback loop, replaced on every step.

    Attributes
    ----------
    lambda_base : float
        Base control signal.
    integral : float
        Clipped error integral.
    prev_error : float
        Error of the previous step.
    """

    lambda_base: float
    integral: float = 0.0
    prev_error: float = 0.0


def initial_state(config: PiConfig) -> PiState:
    """State at the start of a sequence: lambda_init with zero integral and zero previous error."""
    return PiState(config.lambda_init, 0.0, 0.0)


def log_error(rate_actual: float, rate_target: float) -> float:
    """Rate error in the log domain.

    Parameters
    ----------
    rate_actual : float
        Achieved rate.
    rate_target : float
        Target rate.

    Returns
    -------
    float
        ``log(rate_actual / rate_target)``

    Raises
    ------
    ControlException
        Either of the rates is not a positive number.
    """

    if not (rate_actual > 0 and rate_target > 0):
        raise ControlException(f"Rates must be positive: actual={rate_actual}, target={rate_target}")
    return math.log(rate_actual / rate_target)


def pi_step(state: PiState, gains: PiGains, bounds: PiBounds, error: float) -> Tuple[PiState, float]:
    """Single update of the log-domain PID law.

    Integral is clipped before the increment is computed, the increment is clipped before lambda
    is updated and lambda is clipped last. No back-off is applied when lambda saturates.

    Parameters
    ----------
    state : PiState
        Current controller state.
    gains : PiGains
        PID gains.
    bounds : PiBounds
        Control bounds.
    error : float
        Log-domain rate error of the last encoded frame.

    Returns
    -------
    tuple
        Updated state and the clipped log-domain increment.
    """

    integral = float(np.clip(state.integral + error, -bounds.i_max, bounds.i_max))
    derivative = error - state.prev_error
    delta = -(gains.kp * error + gains.ki * integral + gains.kd * derivative)
    delta = float(np.clip(delta, -bounds.delta_max, bounds.delta_max))
    lambda_base = bounds.clip_lambda(state.lambda_base * math.exp(delta))

    return PiState(lambda_base, integral, error), delta
