"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - mini-GOP budget alignment.
"""

import math

import pytest
from ratectl.metrics import AlignmentReport, alignment_report
from ratectl.pipeline.records import FRAME_KIND_I, FRAME_KIND_P, FrameRecord


def make_record(frame: int, kind: str, bpp: float, minigop: int, budget: float) -> FrameRecord:
    """Record with only rate and mini-GOP accounting filled in."""
    nan = math.nan
    return FrameRecord(frame, kind, nan, 1024.0, 0.0, 1024.0, bpp, 0.0, bpp, 1e-3, nan, 0.0, 0.0, minigop, budget)


def test_deviation():
    """One group ten percent over and one ten percent under budget."""
    records = [make_record(0, FRAME_KIND_I, 1.0, -1, math.nan)]
    records += [make_record(1 + i, FRAME_KIND_P, 0.11, 0, 0.4) for i in range(4)]
    records += [make_record(5 + i, FRAME_KIND_P, 0.09, 1, 0.4) for i in range(4)]
    report = alignment_report(records, 4)

    assert [group.minigop for group in report.groups] == [0, 1]
    assert report.groups[0].ratio == pytest.approx(1.1)
    assert report.groups[1].ratio == pytest.approx(0.9)
    assert report.mean_abs_deviation == pytest.approx(0.1)
    assert report.max_ratio_deviation == pytest.approx(0.1)
    assert report.is_passing()
    assert not report.is_passing(0.05)


def test_prorated_budget():
    """Mini-GOP closed by an I-frame gets the budget of its coded frames."""
    records = [make_record(1, FRAME_KIND_P, 0.1, 0, 0.4), make_record(2, FRAME_KIND_P, 0.1, 0, 0.4)]
    report = alignment_report(records, 4)
    assert report.groups[0].frames == 2
    assert report.groups[0].budget == pytest.approx(0.2)
    assert report.groups[0].ratio == pytest.approx(1.0)


def test_exhausted_budget_skipped():
    """Groups without budget are left out."""
    records = [make_record(1, FRAME_KIND_P, 0.1, 0, 0.0)]
    assert not alignment_report(records, 4).groups


def test_empty_report():
    """Report without groups has zero deviation."""
    report = AlignmentReport()
    assert report.mean_abs_deviation == 0.0
    assert report.max_ratio_deviation == 0.0
    assert list(report.to_frame().columns) == ["minigop", "frames", "budget", "spent", "ratio"]


def test_print_results(capsys):
    """Failing groups are highlighted."""
    records = [make_record(1, FRAME_KIND_P, 0.2, 0, 0.1)]
    alignment_report(records, 1).print_results()
    assert AlignmentReport.ERR_CLR in capsys.readouterr().out
