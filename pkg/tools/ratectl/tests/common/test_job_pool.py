"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - job pool.
"""

import pytest
from ratectl.common import JobPool


def square(value: int) -> int:
    """Picklable job."""
    return value * value


@pytest.mark.parametrize("processes", [1, 3])
def test_map_order(processes: int):
    """Results keep the order of jobs."""
    with JobPool(processes) as pool:
        assert pool.map(square, range(20)) == [value * value for value in range(20)]


def test_outside_with():
    """Pool must be entered before use."""
    with pytest.raises(RuntimeError):
        JobPool(2).map(square, [1])


def test_invalid_processes():
    """At least one process is required."""
    with pytest.raises(ValueError):
        JobPool(0)
