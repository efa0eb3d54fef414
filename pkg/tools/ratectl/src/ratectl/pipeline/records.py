"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Per-frame experiment log and its CSV representation.
"""

import logging
import math
from dataclasses import astuple, dataclass, fields
from typing import List

import pandas as pd


class PipelineException(Exception):
    """Sequence cannot be encoded or its log cannot be stored."""


FRAME_KIND_I = "I"
FRAME_KIND_P = "P"


# pylint: disable=invalid-name,too-many-instance-attributes
@dataclass(frozen=True)
class FrameRecord:
    """One row of the per-frame log.

    I-frames carry NaN effective target and error, zero adjustment and mini-GOP index -1.

    Attributes
    ----------
    frame : int
        Frame index.
    kind : str
        Frame kind, I or P.
    r_eff : float
        Effective target rate.
    lambda_base : float
        Base control signal.
    delta_gru : float
        Residual adjustment in log domain.
    lambda_final : float
        Lambda the frame was encoded with.
    bpp_total, bpp_mv, bpp_res : float
        Achieved rates.
    distortion : float
        Achieved distortion.
    e_t : float
        Log-domain rate error of the frame.
    I_t : float
        Clipped error integral including the frame.
    E_t : float
        Accumulated budget deviation including the frame.
    minigop : int
        Index of the mini-GOP of the frame.
    R_mg : float
        Budget of the mini-GOP of the frame.
    """

    frame: int
    kind: str
    r_eff: float
    lambda_base: float
    delta_gru: float
    lambda_final: float
    bpp_total: float
    bpp_mv: float
    bpp_res: float
    distortion: float
    e_t: float
    I_t: float
    E_t: float
    minigop: int
    R_mg: float

    @property
    def psnr(self) -> float:
        """PSNR-equivalent quality in dB with unit reference distortion."""
        return -10.0 * math.log10(self.distortion)

    @property
    def is_p_frame(self) -> bool:
        """Frame takes part in rate control and accounting."""
        return self.kind == FRAME_KIND_P


# CSV header, record field 'lambda_final' is stored as 'lambda'.
FRAME_CSV_COLUMNS = [("lambda" if f.name == "lambda_final" else f.name) for f in fields(FrameRecord)]


def records_to_frame(records: List[FrameRecord]) -> pd.DataFrame:
    """Convert records into a data frame with the CSV columns."""
    return pd.DataFrame([astuple(record) for record in records], columns=FRAME_CSV_COLUMNS)


def write_frames_csv(records: List[FrameRecord], path: str) -> None:
    """Store per-frame log.

    Parameters
    ----------
    records : list
        Records of a single run.
    path : str
        Output CSV path.

    Raises
    ------
    PipelineException
        Unable to write the file.
    """

    try:
        records_to_frame(records).to_csv(path, index=False, encoding="utf-8")
    except OSError as err:
        raise PipelineException(f"Unable to write frame log: {path}") from err
    logging.getLogger().debug("%d frame records written to %s", len(records), path)


def read_frames_csv(path: str) -> List[FrameRecord]:
    """Load per-frame log.

    Parameters
    ----------
    path : str
        Path to a CSV file written by ``write_frames_csv``.

    Returns
    -------
    list
        Frame records.

    Raises
    ------
    PipelineException
        File cannot be read or it has unexpected columns.
    """

    try:
        data = pd.read_csv(path, float_precision="round_trip", keep_default_na=True)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise PipelineException(f"Unable to read frame log: {path}") from err

    if list(data.columns) != FRAME_CSV_COLUMNS:
        raise PipelineException(f"Frame log {path} has unexpected columns: {', '.join(data.columns)}")

    records = []
    for row in data.itertuples(index=False):
        values = list(row)
        values[0] = int(values[0])
        values[1] = str(values[1])
        values[13] = int(values[13])
        values[2:13] = [float(value) for value in values[2:13]]
        values[14] = float(values[14])
        records.append(FrameRecord(*values))
    return records
