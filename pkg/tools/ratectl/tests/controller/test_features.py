"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - controller input features.
"""

import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings
from ratectl.control import BudgetState
from ratectl.controller import build_budget_features, build_coding_stats
from ratectl.plant import EncodeResult


def test_budget_features_neutral():
    """Neutral state gives only the log target."""
    features = build_budget_features(0.1, 0.1, BudgetState(progress=0.0), 4096.0, 4096.0)
    assert np.array_equal(features, [math.log(0.1), 0.0, 0.0, 0.0, 0.0])
    assert features[0] == pytest.approx(-2.302585, abs=1e-6)


def test_budget_features_lambda_position():
    """Last entry locates the base lambda relative to its upper bound."""
    features = build_budget_features(0.1, 0.12, BudgetState(deviation=0.02, progress=0.5), 1024.0, 4096.0)
    assert features[1] == pytest.approx(math.log(1.2))
    assert features[2] == pytest.approx(0.2)
    assert features[3] == 0.5
    assert features[4] == pytest.approx(-1.386294, abs=1e-6)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(0.0, 2.0),
    st.floats(0.0, 2.0),
    st.floats(-10.0, 10.0),
    st.floats(0.0, 1.0),
    st.floats(32.0, 4096.0),
)
def test_budget_features_range(r_eff: float, prev_rate: float, deviation: float, progress: float, lam: float):
    """Features are finite, progress lies in [0, 1] and the lambda position is nonpositive."""
    features = build_budget_features(r_eff, prev_rate, BudgetState(deviation=deviation, progress=progress), lam, 4096.0)
    assert features.shape == (5,)
    assert np.all(np.isfinite(features))
    assert 0.0 <= features[3] <= 1.0
    assert features[4] <= 0.0


def test_coding_stats():
    """Rate shares are relative to the effective target, statistics pass through."""
    prev = EncodeResult.from_split(0.02, 0.08, distortion=1e-3, motion_sparsity=0.5, warp_error=1.0)
    stats = build_coding_stats(prev, 0.1)
    assert stats[0] == pytest.approx(0.2)
    assert stats[1] == pytest.approx(0.8)
    assert stats[2] == 0.5
    assert stats[3] == 0.0


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 100.0), st.floats(0.0, 2.0))
def test_coding_stats_range(bpp_mv: float, bpp_res: float, sparsity: float, warp: float, r_eff: float):
    """Statistics are finite, rate shares nonnegative and sparsity within [0, 1]."""
    prev = EncodeResult.from_split(bpp_mv, bpp_res, distortion=1e-3, motion_sparsity=sparsity, warp_error=warp)
    stats = build_coding_stats(prev, r_eff)
    assert stats.shape == (4,)
    assert np.all(np.isfinite(stats))
    assert stats[0] >= 0.0 and stats[1] >= 0.0
    assert 0.0 <= stats[2] <= 1.0
