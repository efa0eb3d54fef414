#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Script entry-point.
"""

import sys

if __name__ == "__main__":
    from ratectl.core import main

    sys.exit(main())
