"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Rate accuracy of encoded sequences. Only P-frames are counted.
"""

from dataclasses import dataclass
from typing import List

import numpy as np
from ratectl.pipeline.records import FrameRecord


class MetricsException(Exception):
    """Metric cannot be computed from the given data."""


@dataclass(frozen=True)
class SequenceSummary:
    """Summary of a single encoded sequence.

    Attributes
    ----------
    avg_bpp : float
        Average P-frame rate.
    delta_r_pct : float
        Relative rate error in percent.
    avg_quality : float
        Average P-frame PSNR-equivalent quality in dB.
    """

    avg_bpp: float
    delta_r_pct: float
    avg_quality: float


def delta_r(actual_avg: float, target: float) -> float:
    """Relative rate error ``|actual - target| / target * 100``.

    Raises
    ------
    MetricsException
        Target is not positive.
    """

    if not target > 0:
        raise MetricsException(f"Target rate must be positive, got {target}")
    return abs(actual_avg - target) / target * 100.0


def sequence_summary(records: List[FrameRecord], target: float) -> SequenceSummary:
    """Summarize P-frames of a sequence.

    Parameters
    ----------
    records : list
        Records of a single run.
    target : float
        Sequence target rate.

    Returns
    -------
    SequenceSummary
        Average rate, rate error and average quality.

    Raises
    ------
    MetricsException
        Sequence has no P-frame or the target is not positive.
    """

    p_frames = [record for record in records if record.is_p_frame]
    if not p_frames:
        raise MetricsException("Sequence contains no P-frame")

    avg_bpp = float(np.mean([record.bpp_total for record in p_frames]))
    avg_quality = float(np.mean([record.psnr for record in p_frames]))
    return SequenceSummary(avg_bpp, delta_r(avg_bpp, target), avg_quality)
