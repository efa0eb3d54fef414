"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - trace replay plant.
"""

import os

import numpy as np
import pytest
from ratectl.plant import PlantException, SyntheticPlant, TraceException, TracePlant, dump_trace, load_trace


def test_load_two_frames(files_dir: str):
    """Well-formed file yields one grid per frame."""
    table = load_trace(os.path.join(files_dir, "trace_two_frames.csv"))
    assert len(table) == 2
    assert np.array_equal(table.frames[0].lam, [100.0, 400.0])
    assert np.allclose(table.frames[1].bpp_total, [0.06, 0.22])


def test_load_decreasing_lambda(files_dir: str):
    """Decreasing lambda grid is refused naming the frame."""
    with pytest.raises(TraceException, match="Frame 1: column 'lambda'"):
        load_trace(os.path.join(files_dir, "trace_decreasing_lambda.csv"))


def test_load_malformed(files_dir: str):
    """Non-numeric value is refused naming the row and column."""
    with pytest.raises(TraceException, match="row 2.*'bpp_mv'"):
        load_trace(os.path.join(files_dir, "trace_malformed.csv"))


def test_load_missing_column(files_dir: str):
    """Missing column is refused."""
    with pytest.raises(TraceException, match="warp_error"):
        load_trace(os.path.join(files_dir, "trace_missing_column.csv"))


def test_load_missing_file(tmp_path):
    """Nonexistent file is refused with its path."""
    path = str(tmp_path / "none.csv")
    with pytest.raises(TraceException, match="none.csv"):
        load_trace(path)


def test_interpolation_midpoint(files_dir: str):
    """Query in the log-lambda middle of a slope-1 segment gives the geometric mean rate."""
    plant = TracePlant(load_trace(os.path.join(files_dir, "trace_two_frames.csv")))
    res = plant.encode_frame(0, 200.0)
    assert res.bpp_total == pytest.approx(0.10, rel=1e-12)
    assert res.bpp_mv == pytest.approx(0.02, rel=1e-12)
    assert res.d_rate_d_loglambda == pytest.approx(res.bpp_total, rel=1e-12)
    assert not res.clamped


def test_clamp_outside_grid(files_dir: str):
    """Lambda outside of the grid is clamped to the endpoint and has zero derivatives."""
    plant = TracePlant(load_trace(os.path.join(files_dir, "trace_two_frames.csv")))
    low = plant.encode_frame(1, 10.0)
    high = plant.encode_frame(1, 1e5)
    assert low.clamped and high.clamped
    assert low.bpp_total == pytest.approx(0.06)
    assert high.bpp_total == pytest.approx(0.22)
    assert low.d_rate_d_loglambda == 0.0
    assert high.d_dist_d_loglambda == 0.0


def test_iframe_stub(files_dir: str):
    """I-frames of a trace have the configured fixed cost."""
    plant = TracePlant(load_trace(os.path.join(files_dir, "trace_two_frames.csv")), iframe_rate=0.7)
    assert plant.encode_iframe(0).bpp_total == 0.7
    assert plant.encode_iframe(1) == plant.encode_iframe(1)


def test_frames_length(files_dir: str):
    """Trace provides at most as many frames as it contains."""
    plant = TracePlant(load_trace(os.path.join(files_dir, "trace_two_frames.csv")))
    assert plant.frames(2, seed=99) == [0, 1]
    with pytest.raises(PlantException):
        plant.frames(3, seed=0)


def test_nominal_lambda(files_dir: str):
    """Nominal lambda inverts the frame-averaged rate curve."""
    plant = TracePlant(load_trace(os.path.join(files_dir, "trace_two_frames.csv")))
    lam = plant.nominal_lambda(0.12, 32.0, 4096.0)
    assert 100.0 < lam < 400.0
    mean_rate = np.mean([plant.encode_frame(idx, lam).bpp_total for idx in range(2)])
    assert mean_rate == pytest.approx(0.12, rel=0.05)


def test_round_trip(tmp_path, plant: SyntheticPlant):
    """Synthetic samples written to a trace replay bit-identically at grid points."""
    frames = plant.frames(5, seed=42)
    grid = [float(lam) for lam in np.geomspace(32.0, 4096.0, 9)]
    path = str(tmp_path / "trace.csv")
    dump_trace(plant, frames, grid, path)

    replay = TracePlant(load_trace(path))
    assert len(replay.table) == 5
    for idx, frame in enumerate(frames):
        for lam in grid:
            expected = plant.encode_frame(frame, lam)
            actual = replay.encode_frame(idx, lam)
            assert actual.bpp_mv == expected.bpp_mv
            assert actual.bpp_res == expected.bpp_res
            assert actual.distortion == expected.distortion
            assert actual.warp_error == expected.warp_error
