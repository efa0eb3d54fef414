"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from .encoder import MODE_FIXED_LAMBDA, MODE_PI_GRU, MODE_PI_ONLY, MODES, SequenceConfig, encode_sequence
from .records import FrameRecord, PipelineException, read_frames_csv, records_to_frame, write_frames_csv
from .tape import EpisodeTape, TapeFrame
