# pylint: disable=protected-access
"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - synthetic codec plant.
"""

import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings
from ratectl.plant import FrameContent, PlantException, SyntheticCodecParams, SyntheticPlant, init_plant, synth_sequence


def test_degenerate_sequence_is_constant():
    """Without persistence and noise all frames of a sequence share the same content."""
    frames = synth_sequence(SyntheticCodecParams(ar_coeff=0.0, log_noise_sigma=0.0, seed=3), 20)
    for frame in frames[1:]:
        assert frame.complexity == frames[0].complexity
        assert frame.detail == frames[0].detail
        assert frame.noise_factor == frames[0].noise_factor
    assert frames[0].complexity == 1.0
    assert frames[0].noise_factor == 1.0


def test_sequence_determinism():
    """Same parameters produce identical sequences, different seeds differ."""
    params = SyntheticCodecParams(seed=11)
    assert synth_sequence(params, 50) == synth_sequence(params, 50)
    assert synth_sequence(params, 50) != synth_sequence(SyntheticCodecParams(seed=12), 50)


def test_sequence_autocorrelation():
    """Lag-1 autocorrelation of log complexity follows the AR(1) coefficient."""
    params = SyntheticCodecParams(ar_coeff=0.9, log_noise_sigma=0.1)
    plant = SyntheticPlant(params)
    estimates = []
    for seed in range(100):
        log_c = np.log([frame.complexity for frame in plant.frames(96, seed)])
        estimates.append(np.corrcoef(log_c[:-1], log_c[1:])[0, 1])
    assert abs(np.mean(estimates) - 0.9) < 0.15


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 64))
def test_sequence_content_invariants(seed: int, num_frames: int):
    """Generated frames satisfy the content invariants and are indexed in order."""
    frames = synth_sequence(SyntheticCodecParams(seed=seed), num_frames)
    assert len(frames) == num_frames
    for idx, frame in enumerate(frames):
        frame.check()
        assert frame.index == idx


def test_sequence_out_of_range_content():
    """Noise level that drives the content out of its range is reported with the frame."""
    with pytest.raises(PlantException, match=r"Frame \d+ of sequence 4: "):
        synth_sequence(SyntheticCodecParams(log_noise_sigma=2000.0, seed=4), 5)


def test_sequence_empty():
    """Zero frames is refused."""
    with pytest.raises(PlantException):
        synth_sequence(SyntheticCodecParams(), 0)


def test_encode_closed_form(unit_frame: FrameContent):
    """Unit frame at lambda=1024 costs 0.001 * 2^7 bpp."""
    plant = SyntheticPlant(SyntheticCodecParams())
    res = plant.encode_frame(unit_frame, 1024.0)
    assert res.bpp_total == pytest.approx(0.128, rel=1e-12)
    assert res.bpp_mv == pytest.approx(0.25 * 0.128, rel=1e-12)
    assert res.bpp_total == res.bpp_mv + res.bpp_res
    assert res.distortion == pytest.approx(0.16 * 1024**-0.9, rel=1e-12)
    assert res.d_rate_d_loglambda == pytest.approx(0.7 * res.bpp_total, rel=1e-12)
    assert res.d_dist_d_loglambda == pytest.approx(-0.9 * res.distortion, rel=1e-12)
    assert not res.clamped


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 1000), st.floats(1.0, 10000.0))
def test_encode_derivatives(seed: int, lam: float):
    """Analytic derivatives match central differences in log lambda."""
    plant = SyntheticPlant(SyntheticCodecParams())
    frame = plant.frames(3, seed)[2]
    step = 1e-6
    res = plant.encode_frame(frame, lam)
    plus = plant.encode_frame(frame, lam * math.exp(step))
    minus = plant.encode_frame(frame, lam * math.exp(-step))
    assert res.d_rate_d_loglambda == pytest.approx((plus.bpp_total - minus.bpp_total) / (2 * step), rel=1e-6)
    assert res.d_dist_d_loglambda == pytest.approx((plus.distortion - minus.distortion) / (2 * step), rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 1000), st.floats(1.0, 5000.0), st.floats(1.01, 3.0))
def test_encode_monotone(seed: int, lam: float, factor: float):
    """Higher lambda gives higher rate and lower distortion."""
    plant = SyntheticPlant(SyntheticCodecParams())
    frame = plant.frames(1, seed)[0]
    low = plant.encode_frame(frame, lam)
    high = plant.encode_frame(frame, lam * factor)
    assert high.bpp_total > low.bpp_total
    assert high.distortion < low.distortion


@pytest.mark.parametrize("lam", [0.0, -1.0, math.inf, math.nan])
def test_encode_invalid_lambda(unit_frame: FrameContent, lam: float):
    """Lambda must be finite and positive."""
    with pytest.raises(PlantException):
        SyntheticPlant(SyntheticCodecParams()).encode_frame(unit_frame, lam)


def test_encode_iframe(unit_frame: FrameContent):
    """I-frame cost is fixed by the parameters and repeatable."""
    plant = SyntheticPlant(SyntheticCodecParams(iframe_rate=0.5))
    res = plant.encode_iframe(unit_frame)
    assert res.bpp_total == 0.5
    assert res.bpp_mv == 0.0
    assert res == plant.encode_iframe(unit_frame)


def test_nominal_lambda():
    """Nominal lambda inverts the power law at unit complexity and is clipped to the bounds."""
    plant = SyntheticPlant(SyntheticCodecParams())
    assert plant.nominal_lambda(0.128, 32.0, 4096.0) == pytest.approx(1024.0, rel=1e-12)
    assert plant.nominal_lambda(1e-6, 32.0, 4096.0) == 32.0
    assert plant.nominal_lambda(10.0, 32.0, 4096.0) == 4096.0
    with pytest.raises(PlantException):
        plant.nominal_lambda(0.0, 32.0, 4096.0)


def test_frames_use_sequence_seed():
    """Plant frames are generated from the sequence seed, not from the configured one."""
    plant = SyntheticPlant(SyntheticCodecParams(seed=1))
    assert plant._params_with_seed(5).seed == 5
    assert plant.frames(10, 5) == synth_sequence(SyntheticCodecParams(seed=5), 10)


@pytest.mark.parametrize(
    "field,value",
    [("gamma", 0.0), ("gamma", 1.5), ("eta", -1.0), ("ar_coeff", 1.0), ("log_noise_sigma", -0.1)],
)
def test_invalid_params(field: str, value: float):
    """Out of range parameters are refused with the field named."""
    with pytest.raises(PlantException, match=field):
        SyntheticPlant(SyntheticCodecParams(**{field: value}))


def test_init_plant_unknown():
    """Unknown plant name is refused."""
    with pytest.raises(PlantException, match="Unknown codec plant"):
        init_plant("neural", None)
