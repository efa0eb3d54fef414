"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Trace-replay codec. Replays recorded encoder responses sampled on a per-frame lambda grid and
interpolates them log-log between grid points. Lambda outside of the grid is clamped, never
extrapolated.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd
from ratectl.plant.data_types import EncodeResult, PlantException
from ratectl.plant.interface import PlantInterface


class TraceException(PlantException):
    """Trace file cannot be loaded."""


TRACE_COLUMNS = ["frame_idx", "lambda", "bpp_mv", "bpp_res", "distortion", "motion_sparsity", "warp_error"]


@dataclass(frozen=True)
class TraceGrid:
    """Recorded responses of a single frame. All arrays share the lambda grid order.

    Attributes
    ----------
    lam : np.ndarray
        Strictly increasing lambda grid.
    bpp_mv : np.ndarray
        Motion rate at grid points.
    bpp_res : np.ndarray
        Residual rate at grid points.
    distortion : np.ndarray
        Distortion at grid points.
    motion_sparsity : np.ndarray
        Motion sparsity indicator at grid points.
    warp_error : np.ndarray
        Motion-compensation error at grid points.
    """

    lam: np.ndarray
    bpp_mv: np.ndarray
    bpp_res: np.ndarray
    distortion: np.ndarray
    motion_sparsity: np.ndarray
    warp_error: np.ndarray

    @property
    def bpp_total(self) -> np.ndarray:
        """Total rate at grid points."""
        return self.bpp_mv + self.bpp_res


@dataclass(frozen=True)
class TraceTable:
    """Validated trace, one grid per frame index (0 .. N-1)."""

    frames: Dict[int, TraceGrid]

    def __len__(self) -> int:
        return len(self.frames)


def _check_frame(frame_idx: int, group: pd.DataFrame) -> TraceGrid:
    """Validate rows of a single frame and convert them to a grid."""

    if len(group.index) < 2:
        raise TraceException(f"Frame {frame_idx}: column 'lambda' needs at least 2 grid points, got {len(group.index)}")

    grid = TraceGrid(*(group[col].to_numpy(dtype=np.float64) for col in TRACE_COLUMNS[1:]))

    if np.any(grid.lam <= 0):
        raise TraceException(f"Frame {frame_idx}: column 'lambda' must be positive")
    if np.any(np.diff(grid.lam) <= 0):
        raise TraceException(f"Frame {frame_idx}: column 'lambda' is not strictly increasing")
    for col in ("bpp_mv", "bpp_res"):
        if np.any(getattr(grid, col) < 0):
            raise TraceException(f"Frame {frame_idx}: column '{col}' must be nonnegative")
    if np.any(grid.bpp_total <= 0):
        raise TraceException(f"Frame {frame_idx}: columns 'bpp_mv' + 'bpp_res' must be positive")
    if np.any(np.diff(grid.bpp_total) < 0):
        raise TraceException(f"Frame {frame_idx}: columns 'bpp_mv' + 'bpp_res' are not nondecreasing in lambda")
    for col in ("distortion", "warp_error"):
        if np.any(getattr(grid, col) <= 0):
            raise TraceException(f"Frame {frame_idx}: column '{col}' must be positive")
    if np.any((grid.motion_sparsity < 0) | (grid.motion_sparsity > 1)):
        raise TraceException(f"Frame {frame_idx}: column 'motion_sparsity' must be in range 0 - 1")

    return grid


def load_trace(path: str) -> TraceTable:
    """Read and validate a trace CSV file.

    Parameters
    ----------
    path : str
        Path to a CSV file with header ``frame_idx,lambda,bpp_mv,bpp_res,distortion,motion_sparsity,warp_error``.

    Returns
    -------
    TraceTable
        Validated trace.

    Raises
    ------
    TraceException
        File cannot be read or it violates the trace schema. The message names the frame and column.
    """

    logging.getLogger().debug("reading trace file=%s", path)
    try:
        data = pd.read_csv(path, float_precision="round_trip", dtype=str)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as err:
        raise TraceException(f"Unable to read trace file: {path}") from err

    missing = [col for col in TRACE_COLUMNS if col not in data.columns]
    if missing:
        raise TraceException(f"Trace file {path} is missing columns: {', '.join(missing)}")

    converted = {}
    for col in TRACE_COLUMNS:
        values = pd.to_numeric(data[col], errors="coerce")
        bad = values.isna() | ~np.isfinite(values.to_numpy(dtype=np.float64, na_value=np.nan))
        if bad.any():
            row = int(bad.to_numpy().nonzero()[0][0])
            frame = data["frame_idx"].iloc[row]
            raise TraceException(f"Malformed row {row + 1} (frame {frame}): column '{col}' is not a finite number")
        converted[col] = values.astype(np.float64)
    data = pd.DataFrame(converted)

    frame_idx = data["frame_idx"]
    if np.any(frame_idx != np.floor(frame_idx)) or np.any(frame_idx < 0):
        raise TraceException(f"Trace file {path}: column 'frame_idx' must contain nonnegative integers")
    if np.any(np.diff(frame_idx.to_numpy()) < 0):
        raise TraceException(f"Trace file {path}: rows are not sorted by column 'frame_idx'")

    frames = {}
    for idx, group in data.groupby("frame_idx", sort=True):
        frames[int(idx)] = _check_frame(int(idx), group)

    if sorted(frames) != list(range(len(frames))):
        missing_idx = sorted(set(range(max(frames) + 1)) - set(frames))
        raise TraceException(f"Trace file {path}: column 'frame_idx' has no rows for frames {missing_idx}")

    logging.getLogger().info("loaded trace %s with %d frames", path, len(frames))
    return TraceTable(frames)


def dump_trace(plant: PlantInterface, frames: Sequence[Any], grid: Sequence[float], path: str) -> None:
    """Sample a plant on a lambda grid and write the samples in the trace CSV schema.

    Parameters
    ----------
    plant : PlantInterface
        Plant to be sampled.
    frames : list
        Frames of the plant, their position is used as the frame index.
    grid : list
        Strictly increasing lambda grid.
    path : str
        Output CSV path.

    Raises
    ------
    PlantException
        Unable to write the file.
    """

    rows = []
    for frame_idx, frame in enumerate(frames):
        for lam in grid:
            res = plant.encode_frame(frame, lam)
            rows.append(
                (frame_idx, lam, res.bpp_mv, res.bpp_res, res.distortion, res.motion_sparsity, res.warp_error)
            )

    logging.getLogger().debug("saving trace=%s", path)
    try:
        pd.DataFrame(rows, columns=TRACE_COLUMNS).to_csv(path, index=False, encoding="utf-8")
    except OSError as err:
        raise PlantException(f"Unable to write trace file: {path}") from err
    logging.getLogger().info("%d trace rows written to %s", len(rows), path)


class TracePlant(PlantInterface):
    """Plant replaying a trace table.

    Attributes
    ----------
    table : TraceTable
        Validated trace.
    iframe_rate : float
        Fixed I-frame cost in bpp.
    iframe_distortion : float
        Fixed I-frame distortion.
    """

    NAME = "trace"

    def __init__(self, table: TraceTable, iframe_rate: float = 0.5, iframe_distortion: float = 3e-4) -> None:
        if iframe_rate <= 0 or iframe_distortion <= 0:
            raise PlantException("I-frame rate and distortion must be positive")

        self.table = table
        self.iframe_rate = iframe_rate
        self.iframe_distortion = iframe_distortion

    @classmethod
    def from_config(cls, cfg) -> "TracePlant":
        if not cfg.trace.path:
            raise PlantException("Trace plant requires a trace file path")
        return cls(load_trace(cfg.trace.path), cfg.trace.iframe_rate, cfg.trace.iframe_distortion)

    def frames(self, num_frames: int, seed: int) -> List[int]:
        if not 1 <= num_frames <= len(self.table):
            raise PlantException(f"Trace contains {len(self.table)} frames, requested {num_frames}")
        return list(range(num_frames))

    def encode_frame(self, frame: int, lam: float) -> EncodeResult:
        if not (math.isfinite(lam) and lam > 0):
            raise PlantException(f"Lambda must be a finite positive number, got {lam}")

        grid = self.table.frames[frame]
        clamped = bool(lam < grid.lam[0] or lam > grid.lam[-1])
        lam = min(max(lam, grid.lam[0]), grid.lam[-1])

        total = grid.bpp_total
        seg = min(int(np.searchsorted(grid.lam, lam, side="right")) - 1, len(grid.lam) - 2)
        log_lam = np.log(grid.lam[seg : seg + 2])
        width = log_lam[1] - log_lam[0]
        rate_slope = (math.log(total[seg + 1]) - math.log(total[seg])) / width
        dist_slope = (math.log(grid.distortion[seg + 1]) - math.log(grid.distortion[seg])) / width

        hit = np.nonzero(grid.lam == lam)[0]
        if hit.size:
            point = int(hit[0])
            bpp_mv = float(grid.bpp_mv[point])
            bpp_res = float(grid.bpp_res[point])
            distortion = float(grid.distortion[point])
            sparsity = float(grid.motion_sparsity[point])
            warp = float(grid.warp_error[point])
        else:
            weight = (math.log(lam) - log_lam[0]) / width
            rate = math.exp((1 - weight) * math.log(total[seg]) + weight * math.log(total[seg + 1]))
            share = (1 - weight) * grid.bpp_mv[seg] / total[seg] + weight * grid.bpp_mv[seg + 1] / total[seg + 1]
            bpp_mv = float(share * rate)
            bpp_res = float((1 - share) * rate)
            distortion = math.exp(
                (1 - weight) * math.log(grid.distortion[seg]) + weight * math.log(grid.distortion[seg + 1])
            )
            sparsity = float((1 - weight) * grid.motion_sparsity[seg] + weight * grid.motion_sparsity[seg + 1])
            warp = math.exp((1 - weight) * math.log(grid.warp_error[seg]) + weight * math.log(grid.warp_error[seg + 1]))

        bpp_total = bpp_mv + bpp_res
        return EncodeResult(
            bpp_total=bpp_total,
            bpp_mv=bpp_mv,
            bpp_res=bpp_res,
            distortion=distortion,
            motion_sparsity=sparsity,
            warp_error=warp,
            d_rate_d_loglambda=0.0 if clamped else rate_slope * bpp_total,
            d_dist_d_loglambda=0.0 if clamped else dist_slope * distortion,
            clamped=clamped,
        )

    def encode_iframe(self, frame: int) -> EncodeResult:
        grid = self.table.frames[frame]
        return EncodeResult.from_split(
            0.0,
            self.iframe_rate,
            distortion=self.iframe_distortion,
            motion_sparsity=float(grid.motion_sparsity[0]),
            warp_error=float(grid.warp_error[0]),
        )

    def nominal_lambda(self, rate: float, lambda_min: float, lambda_max: float) -> float:
        if rate <= 0:
            raise PlantException(f"Rate must be positive, got {rate}")

        # frame-averaged response on a common grid
        grid = np.geomspace(lambda_min, lambda_max, 64)
        mean_rate = np.array(
            [np.mean([self.encode_frame(idx, lam).bpp_total for idx in self.table.frames]) for lam in grid]
        )
        log_lam = np.interp(math.log(rate), np.log(np.maximum.accumulate(mean_rate)), np.log(grid))
        return float(min(max(math.exp(log_lam), lambda_min), lambda_max))
