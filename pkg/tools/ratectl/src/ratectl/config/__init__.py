"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from .config import ConfigException, ExperimentConfig, load_config, require_weights
