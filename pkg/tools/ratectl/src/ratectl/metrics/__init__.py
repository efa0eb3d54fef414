"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from .alignment import AlignmentReport, MiniGopAlignment, alignment_report
from .bd_rate import RdPoint, bd_rate
from .rate_error import MetricsException, SequenceSummary, delta_r, sequence_summary
