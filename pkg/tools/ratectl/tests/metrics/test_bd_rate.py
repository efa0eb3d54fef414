"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - BD-rate.
"""

import pytest
from ratectl.metrics import MetricsException, RdPoint, bd_rate

RATES = [0.05, 0.08, 0.12, 0.18]
QUALITY = [30.0, 32.1, 33.9, 35.4]


def curve(scale: float = 1.0, rates=None, quality=None):
    """Rate-quality curve with rates multiplied by the scale."""
    return [RdPoint(rate * scale, q) for rate, q in zip(rates or RATES, quality or QUALITY)]


@pytest.mark.parametrize("piecewise", [False, True])
@pytest.mark.parametrize("scale, expected", [(1.0, 0.0), (2.0, 100.0), (0.5, -50.0)])
def test_scaled_curves(scale: float, expected: float, piecewise: bool):
    """Curve with all rates scaled differs by the scale at every quality."""
    assert bd_rate(curve(), curve(scale), piecewise) == pytest.approx(expected, abs=1e-8)


def test_sign():
    """Higher quality at equal rate means savings."""
    better = curve(quality=[q + 0.5 for q in QUALITY])
    assert bd_rate(curve(), better) < 0
    assert bd_rate(better, curve()) > 0


def test_too_few_points():
    """Three points are not enough."""
    with pytest.raises(MetricsException, match="at least"):
        bd_rate(curve()[:3], curve())


def test_non_monotone():
    """Quality must grow with rate."""
    with pytest.raises(MetricsException, match="monotone"):
        bd_rate(curve(), curve(quality=[30.0, 32.1, 31.0, 35.4]))
    with pytest.raises(MetricsException, match="increasing"):
        bd_rate(curve(rates=[0.05, 0.05, 0.12, 0.18]), curve())


def test_no_overlap():
    """Disjoint quality ranges have no BD-rate."""
    with pytest.raises(MetricsException, match="overlap"):
        bd_rate(curve(), curve(quality=[q + 10.0 for q in QUALITY]))
