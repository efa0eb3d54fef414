"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from typing import Any

from .data_types import EncodeResult, FrameContent, PlantException, SyntheticCodecParams
from .interface import PlantInterface
from .synthetic import SyntheticPlant, synth_sequence
from .trace import TraceException, TracePlant, dump_trace, load_trace

codec_plants = [SyntheticPlant, TracePlant]


def init_plant(name: str, cfg: Any) -> PlantInterface:
    """Initialize codec plant.

    Parameters
    ----------
    name : str
        Name of the plant.
    cfg : PlantCfg
        Plant section of the experiment configuration.

    Returns
    -------
    PlantInterface
        Codec plant (object) overriding methods of PlantInterface abstract class.

    Raises
    ------
    PlantException
        Unknown name of the plant or error during plant initialization.
    """

    for plant in codec_plants:
        if plant.NAME == name:
            return plant.from_config(cfg)

    raise PlantException(f"Unknown codec plant: {name}")
