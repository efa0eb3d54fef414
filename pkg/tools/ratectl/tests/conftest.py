"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Pytest fixtures shared by unit tests of the rate control lab.
"""

import os

import pytest
from ratectl.control import PiConfig
from ratectl.plant import FrameContent, SyntheticCodecParams, SyntheticPlant

FILES_DIR = os.path.join(os.path.dirname(os.path.realpath(__file__)), "files")


@pytest.fixture(name="files_dir")
def fixture_files_dir() -> str:
    """Directory with test input files."""
    return FILES_DIR


@pytest.fixture(name="plant")
def fixture_plant() -> SyntheticPlant:
    """Synthetic plant with default parameters."""
    return SyntheticPlant(SyntheticCodecParams())


@pytest.fixture(name="flat_plant")
def fixture_flat_plant() -> SyntheticPlant:
    """Noise-free synthetic plant with constant unit content."""
    return SyntheticPlant(SyntheticCodecParams(ar_coeff=0.0, log_noise_sigma=0.0))


@pytest.fixture(name="unit_frame")
def fixture_unit_frame() -> FrameContent:
    """Frame with unit complexity, detail and noise."""
    return FrameContent(complexity=1.0, detail=1.0, motion_share=0.25, motion_sparsity=0.5, warp_error=1.0)


@pytest.fixture(name="pi_config")
def fixture_pi_config() -> PiConfig:
    """Base controller configuration with default gains and bounds."""
    return PiConfig()
