"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from .job_pool import JobPool
