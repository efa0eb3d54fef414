"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from .features import EPS, build_budget_features, build_coding_stats
from .network import ControllerState, compose_lambda, controller_forward, forward_with_cache, gru_cell
from .weights import (
    ControllerWeights,
    WeightsException,
    init_weights,
    load_weights,
    log_parameter_count,
    parameter_count,
    save_weights,
)
