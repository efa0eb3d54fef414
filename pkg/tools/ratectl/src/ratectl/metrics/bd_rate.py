"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Bjontegaard delta rate between two rate-quality curves. Log rate is fitted as a function of quality
and the mean difference over the overlapping quality interval is converted to a percentage.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from ratectl.metrics.rate_error import MetricsException
from scipy import integrate, interpolate

MIN_POINTS = 4
INTEGRATION_SAMPLES = 1000


@dataclass(frozen=True)
class RdPoint:
    """Point of a rate-quality curve.

    Attributes
    ----------
    rate : float
        Average P-frame rate in bpp.
    quality : float
        PSNR-equivalent quality in dB.
    """

    rate: float
    quality: float


def _curve(points: Sequence[RdPoint], name: str):
    if len(points) < MIN_POINTS:
        raise MetricsException(f"{name} curve has {len(points)} points, at least {MIN_POINTS} required")

    rate = np.array([point.rate for point in points], dtype=np.float64)
    quality = np.array([point.quality for point in points], dtype=np.float64)
    if not np.all(np.isfinite(rate)) or not np.all(np.isfinite(quality)):
        raise MetricsException(f"{name} curve contains non-finite values")
    if np.any(rate <= 0):
        raise MetricsException(f"{name} curve contains nonpositive rates")
    if np.any(np.diff(rate) <= 0):
        raise MetricsException(f"{name} curve is not strictly increasing in rate")
    if np.any(np.diff(quality) <= 0):
        raise MetricsException(f"{name} curve is not monotone, quality must increase with rate")
    return np.log(rate), quality


def bd_rate(anchor: Sequence[RdPoint], test: Sequence[RdPoint], piecewise: bool = False) -> float:
    """BD-rate of the test curve against the anchor curve.

    Parameters
    ----------
    anchor : list
        Anchor curve sorted by rate.
    test : list
        Test curve sorted by rate.
    piecewise : bool
        Use piecewise cubic Hermite interpolation instead of a cubic polynomial fit.

    Returns
    -------
    float
        Average rate difference at equal quality in percent, negative means savings.

    Raises
    ------
    MetricsException
        Not enough points, a non-monotone curve or no quality overlap.
    """

    anchor_log_rate, anchor_quality = _curve(anchor, "Anchor")
    test_log_rate, test_quality = _curve(test, "Test")

    low = max(anchor_quality.min(), test_quality.min())
    high = min(anchor_quality.max(), test_quality.max())
    if not high > low:
        raise MetricsException(f"Curves do not overlap in quality ({low:.4f} >= {high:.4f})")

    samples = np.linspace(low, high, INTEGRATION_SAMPLES)
    if piecewise:
        anchor_values = interpolate.pchip_interpolate(anchor_quality, anchor_log_rate, samples)
        test_values = interpolate.pchip_interpolate(test_quality, test_log_rate, samples)
    else:
        anchor_values = np.polyval(np.polyfit(anchor_quality, anchor_log_rate, 3), samples)
        test_values = np.polyval(np.polyfit(test_quality, test_log_rate, 3), samples)

    anchor_int = integrate.trapezoid(anchor_values, samples)
    test_int = integrate.trapezoid(test_values, samples)
    return float((np.exp((test_int - anchor_int) / (high - low)) - 1.0) * 100.0)
