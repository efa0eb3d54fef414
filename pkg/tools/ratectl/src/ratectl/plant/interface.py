"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Contains interface definition which all codec plants must implement.
"""

from abc import ABCMeta, abstractmethod
from typing import Any, List

from ratectl.plant.data_types import EncodeResult


class PlantInterface(metaclass=ABCMeta):
    """Abstract class defining the interface between codec plants and the control loop.

    A plant maps a control parameter lambda to the rate and distortion of a frame. Larger lambda
    always yields a higher rate and a lower distortion. Plants are immutable after construction.
    Frames are opaque objects produced by ``frames`` and passed back into the encode methods.
    """

    NAME = ""

    @classmethod
    @abstractmethod
    def from_config(cls, cfg: Any) -> "PlantInterface":
        """Create the plant from the plant section of the experiment configuration.

        Parameters
        ----------
        cfg : PlantCfg
            Plant configuration.

        Raises
        ------
        PlantException
            Plant cannot be constructed from the configuration.
        """
        raise NotImplementedError

    @abstractmethod
    def frames(self, num_frames: int, seed: int) -> List[Any]:
        """Produce frames of a single sequence.

        Parameters
        ----------
        num_frames : int
            Number of frames of the sequence.
        seed : int
            Sequence seed. Plants replaying recorded data may ignore it.

        Returns
        -------
        list
            Frames to be passed to ``encode_frame`` and ``encode_iframe``.

        Raises
        ------
        PlantException
            The plant cannot provide the requested sequence.
        """
        raise NotImplementedError

    @abstractmethod
    def encode_frame(self, frame: Any, lam: float) -> EncodeResult:
        """Encode a P-frame with the given lambda.

        Parameters
        ----------
        frame : Any
            Frame obtained from ``frames``.
        lam : float
            Control parameter.

        Returns
        -------
        EncodeResult
            Rate, distortion, coding statistics and derivatives with respect to log lambda.
        """
        raise NotImplementedError

    @abstractmethod
    def encode_iframe(self, frame: Any) -> EncodeResult:
        """Encode an I-frame. The cost does not depend on lambda.

        Parameters
        ----------
        frame : Any
            Frame obtained from ``frames``.

        Returns
        -------
        EncodeResult
            Fixed-cost result of the frame.
        """
        raise NotImplementedError

    @abstractmethod
    def nominal_lambda(self, rate: float, lambda_min: float, lambda_max: float) -> float:
        """Lambda which an open-loop rate model would choose for the given rate.

        Parameters
        ----------
        rate : float
            Requested rate in bpp.
        lambda_min : float
            Lower control bound.
        lambda_max : float
            Upper control bound.

        Returns
        -------
        float
            Lambda clipped to the control bounds.
        """
        raise NotImplementedError
