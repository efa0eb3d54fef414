"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Alignment of mini-GOP expenditure with the allocated budgets.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np
import pandas as pd
from ratectl.pipeline.records import FrameRecord


@dataclass(frozen=True)
class MiniGopAlignment:
    """Expenditure of a single mini-GOP.

    Attributes
    ----------
    minigop : int
        Mini-GOP index.
    frames : int
        Number of coded P-frames, lower than the mini-GOP length when closed by an I-frame.
    budget : float
        Budget prorated to the coded frames.
    spent : float
        Sum of P-frame rates.
    """

    minigop: int
    frames: int
    budget: float
    spent: float

    @property
    def ratio(self) -> float:
        """Spent to budget ratio."""
        return self.spent / self.budget


@dataclass
class AlignmentReport:
    """Per mini-GOP alignment and its aggregates.

    Attributes
    ----------
    groups : list
        Alignment of mini-GOPs with a positive budget.
    """

    ERR_CLR = "\033[31m"
    RST_CLR = "\033[0m"

    groups: List[MiniGopAlignment] = field(default_factory=list)

    @property
    def mean_abs_deviation(self) -> float:
        """Mean of ``|spent - budget| / budget``, zero for an empty report."""
        if not self.groups:
            return 0.0
        return float(np.mean([abs(group.ratio - 1.0) for group in self.groups]))

    @property
    def max_ratio_deviation(self) -> float:
        """Largest ``|ratio - 1|``, zero for an empty report."""
        if not self.groups:
            return 0.0
        return float(max(abs(group.ratio - 1.0) for group in self.groups))

    def is_passing(self, threshold: float = 0.15) -> bool:
        """Mean deviation is within the threshold."""
        return self.mean_abs_deviation <= threshold

    def to_frame(self) -> pd.DataFrame:
        """Report as a data frame with one row per mini-GOP."""
        return pd.DataFrame(
            [(group.minigop, group.frames, group.budget, group.spent, group.ratio) for group in self.groups],
            columns=["minigop", "frames", "budget", "spent", "ratio"],
        )

    def print_results(self, threshold: float = 0.15) -> None:
        """Print alignment of all mini-GOPs to stdout, groups deviating over the threshold are highlighted."""

        print()
        for group in self.groups:
            failed = abs(group.ratio - 1.0) > threshold
            line = self.ERR_CLR if failed else ""
            line += f"MINIGOP {group.minigop}\t{group.spent:.4f}/{group.budget:.4f}\t({group.ratio:.4f})"
            if failed:
                line += self.RST_CLR
            print(line)
        print(f"MEAN |DEV|\t{self.mean_abs_deviation * 100:.2f}%\tMAX |DEV|\t{self.max_ratio_deviation * 100:.2f}%")


def alignment_report(records: List[FrameRecord], minigop_len: int) -> AlignmentReport:
    """Group P-frames by mini-GOP and compare their expenditure with the budget.

    Budget of a mini-GOP closed early is prorated to the number of coded frames. Mini-GOPs with a
    nonpositive budget are left out.

    Parameters
    ----------
    records : list
        Records of a single run.
    minigop_len : int
        Mini-GOP length the run was encoded with.

    Returns
    -------
    AlignmentReport
        Alignment report.
    """

    groups = {}
    for record in records:
        if record.is_p_frame:
            groups.setdefault(record.minigop, []).append(record)

    report = AlignmentReport()
    for minigop, members in sorted(groups.items()):
        budget = members[0].R_mg * len(members) / minigop_len
        if budget <= 0:
            continue
        report.groups.append(
            MiniGopAlignment(minigop, len(members), budget, float(sum(record.bpp_total for record in members)))
        )
    return report
