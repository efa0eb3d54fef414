"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Unit tests for ratectl - per-frame logs.
"""

import pytest
from ratectl.control import BudgetSettings, PiConfig
from ratectl.pipeline import (
    MODE_PI_ONLY,
    PipelineException,
    SequenceConfig,
    encode_sequence,
    read_frames_csv,
    records_to_frame,
    write_frames_csv,
)
from ratectl.plant import SyntheticPlant

HEADER = "frame,kind,r_eff,lambda_base,delta_gru,lambda,bpp_total,bpp_mv,bpp_res,distortion,e_t,I_t,E_t,minigop,R_mg"


def test_write_read(tmp_path, plant: SyntheticPlant, pi_config: PiConfig):
    """Stored log has the documented header and loads back unchanged."""
    records = encode_sequence(
        plant, SequenceConfig(0.1, MODE_PI_ONLY, 40, 32), pi_config, BudgetSettings().for_target(0.1)
    )
    path = tmp_path / "frames.csv"
    write_frames_csv(records, str(path))

    assert path.read_text(encoding="utf-8").splitlines()[0] == HEADER
    loaded = read_frames_csv(str(path))
    assert len(loaded) == len(records)
    assert records_to_frame(loaded).equals(records_to_frame(records))
    assert loaded[1].psnr == records[1].psnr


def test_read_unexpected_columns(tmp_path):
    """Log with other columns is refused."""
    path = tmp_path / "frames.csv"
    path.write_text("frame,kind\n0,I\n", encoding="utf-8")
    with pytest.raises(PipelineException, match="unexpected columns"):
        read_frames_csv(str(path))


def test_read_missing(tmp_path):
    """Missing log is refused."""
    with pytest.raises(PipelineException):
        read_frames_csv(str(tmp_path / "none.csv"))
