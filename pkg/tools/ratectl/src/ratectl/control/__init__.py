"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from .budget import (
    BudgetConfig,
    BudgetSettings,
    BudgetState,
    effective_target,
    initial_budget_state,
    open_minigop,
    record_p_frame,
)
from .pi_controller import (
    ControlException,
    PiBounds,
    PiConfig,
    PiGains,
    PiState,
    initial_state,
    log_error,
    pi_step,
)
