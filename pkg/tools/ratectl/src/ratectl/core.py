"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Core logic of the rate control lab. Parse arguments, load the experiment configuration and run
the selected command: simulate sequences, train the adjustment controller, evaluate run outputs,
check gradients or dump plant samples into a trace.
"""

import argparse
import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from ratectl.common import JobPool
from ratectl.config import ConfigException, ExperimentConfig, load_config, require_weights
from ratectl.control import ControlException
from ratectl.controller import (
    ControllerWeights,
    WeightsException,
    init_weights,
    load_weights,
    log_parameter_count,
    save_weights,
)
from ratectl.metrics import MetricsException, RdPoint, alignment_report, bd_rate, sequence_summary
from ratectl.pipeline import (
    MODE_FIXED_LAMBDA,
    PipelineException,
    SequenceConfig,
    encode_sequence,
    read_frames_csv,
    write_frames_csv,
)
from ratectl.plant import PlantException, PlantInterface, dump_trace, init_plant
from ratectl.training import (
    GradCheckException,
    TrainingException,
    assert_gradients,
    episode_backward,
    gradient_check,
    run_episode,
    train,
    write_train_log,
)

LOGGING_FORMAT = "%(asctime)-15s,%(name)s,[%(levelname)s],%(filename)s:%(funcName)s - %(message)s"
LOGGING_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
logging.basicConfig(level=logging.INFO, format=LOGGING_FORMAT, datefmt=LOGGING_DATE_FORMAT)

SUMMARY_COLUMNS = ["dataset", "mode", "target", "avg_bpp", "delta_r_pct", "avg_quality"]
ALIGNMENT_COLUMNS = ["dataset", "mode", "target", "minigops", "mean_abs_dev", "max_ratio_dev"]
MINIGOP_COLUMNS = ["dataset", "mode", "target", "minigop", "frames", "budget", "spent", "ratio"]
GRADCHECK_COLUMNS = ["tensor", "rel_error"]

# Independent seed streams derived from the experiment seed.
STREAM_SEQUENCES = 0
STREAM_CORPUS = 1
STREAM_GRADCHECK = 2

SEED_LIMIT = 2**31 - 1

COMPONENT_EXCEPTIONS = (
    ConfigException,
    PlantException,
    ControlException,
    WeightsException,
    PipelineException,
    TrainingException,
    GradCheckException,
    MetricsException,
)


def stream_seeds(seed: int, stream: int, count: int) -> List[int]:
    """Seeds of a single purpose (evaluation sequences, training corpus, ...) derived from the experiment seed."""
    rng = np.random.default_rng((seed, stream))
    return [int(value) for value in rng.integers(0, SEED_LIMIT, size=count)]


def dataset_name(index: int) -> str:
    """Name of the index-th evaluation sequence."""
    return f"seq{index}"


def frames_path(config: ExperimentConfig, mode: str, index: int, target: float) -> str:
    """Path of a per-frame log."""
    return os.path.join(config.run_dir, mode, dataset_name(index), f"frames_{target!r}.csv")


def build_plant(config: ExperimentConfig) -> PlantInterface:
    """Construct the plant selected by the configuration."""
    plant = init_plant(config.plant.kind, config.plant)
    logging.getLogger().info("using %s plant", plant.NAME)
    return plant


def write_csv(data: pd.DataFrame, path: str) -> None:
    """Store a result table.

    Raises
    ------
    MetricsException
        Unable to write the file.
    """

    try:
        data.to_csv(path, index=False, encoding="utf-8")
    except OSError as err:
        raise MetricsException(f"Unable to write file: {path}") from err
    logging.getLogger().info("%d rows written to %s", len(data.index), path)


def _make_dir(path: str) -> None:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as err:
        raise ConfigException(f"Unable to create output directory: {path}") from err


@dataclass(frozen=True)
class SimulationJob:
    """All sequences of a single (mode, dataset) pair."""

    plant: PlantInterface
    config: ExperimentConfig
    weights: Optional[ControllerWeights]
    mode: str
    index: int
    seed: int


def simulate_job(job: SimulationJob) -> List[tuple]:
    """Encode a sequence for every target and store per-frame logs.

    Returns
    -------
    list
        Summary rows in the order of targets.
    """

    config = job.config
    bounds = config.control.pi.bounds
    frames = job.plant.frames(config.sequence.num_frames, job.seed)
    _make_dir(os.path.dirname(frames_path(config, job.mode, job.index, config.targets[0])))

    rows = []
    for target in config.targets:
        fixed = None
        if job.mode == MODE_FIXED_LAMBDA:
            fixed = config.sequence.fixed_lambda
            if fixed is None:
                fixed = job.plant.nominal_lambda(target, bounds.lambda_min, bounds.lambda_max)

        seq_config = SequenceConfig(target, job.mode, config.sequence.num_frames, config.sequence.gop_size, fixed)
        records = encode_sequence(
            job.plant,
            seq_config,
            config.control.pi,
            config.control.budget.for_target(target),
            job.weights if job.mode != MODE_FIXED_LAMBDA else None,
            job.seed,
            frames,
        )
        write_frames_csv(records, frames_path(config, job.mode, job.index, target))
        summary = sequence_summary(records, target)
        rows.append(
            (dataset_name(job.index), job.mode, target, summary.avg_bpp, summary.delta_r_pct, summary.avg_quality)
        )
    return rows


def cmd_simulate(config: ExperimentConfig) -> None:
    """Encode all evaluation sequences in all modes and store per-frame logs and the summary."""

    plant = build_plant(config)
    weights = None
    weights_path = require_weights(config)
    if weights_path:
        weights = load_weights(weights_path)
        log_parameter_count(weights)

    seeds = stream_seeds(config.seed, STREAM_SEQUENCES, config.sequence.sequences)
    jobs = [
        SimulationJob(plant, config, weights if mode != MODE_FIXED_LAMBDA else None, mode, index, seed)
        for mode in config.sequence.modes
        for index, seed in enumerate(seeds)
    ]
    logging.getLogger().info("simulating %d sequences in modes %s", len(seeds), ", ".join(config.sequence.modes))

    _make_dir(config.run_dir)
    with JobPool(config.jobs) as pool:
        results = pool.map(simulate_job, jobs)

    rows = [row for job_rows in results for row in job_rows]
    write_csv(pd.DataFrame(rows, columns=SUMMARY_COLUMNS), os.path.join(config.run_dir, "summary.csv"))


def _load_run(config: ExperimentConfig) -> Dict[Tuple[str, int, float], list]:
    runs = {}
    for mode in config.sequence.modes:
        for index in range(config.sequence.sequences):
            for target in config.targets:
                path = frames_path(config, mode, index, target)
                if not os.path.isfile(path):
                    raise MetricsException(f"Missing run output {path}, run simulate first")
                runs[(mode, index, target)] = read_frames_csv(path)
    return runs


def _bd_rate_matrix(config: ExperimentConfig, curves: Dict[Tuple[str, int], List[RdPoint]]) -> pd.DataFrame:
    modes = config.sequence.modes
    piecewise = config.eval.bd_interp == "pchip"
    matrix = pd.DataFrame(np.nan, index=modes, columns=modes)
    for anchor in modes:
        for test in modes:
            values = []
            for index in range(config.sequence.sequences):
                try:
                    values.append(bd_rate(curves[(anchor, index)], curves[(test, index)], piecewise))
                except MetricsException as err:
                    logging.getLogger().warning(
                        "BD-rate %s vs %s of %s skipped: %s", test, anchor, dataset_name(index), err
                    )
            if values:
                matrix.loc[anchor, test] = float(np.mean(values))
            else:
                logging.getLogger().warning("BD-rate %s vs %s cannot be computed", test, anchor)
    matrix.index.name = "anchor"
    return matrix.reset_index()


def cmd_eval(config: ExperimentConfig) -> None:
    """Recompute summaries from per-frame logs, compute the BD-rate matrix between modes and budget alignment."""

    runs = _load_run(config)
    summary_rows = []
    alignment_rows = []
    minigop_frames = []
    curves = {}
    for (mode, index, target), records in runs.items():
        summary = sequence_summary(records, target)
        summary_rows.append(
            (dataset_name(index), mode, target, summary.avg_bpp, summary.delta_r_pct, summary.avg_quality)
        )
        curves.setdefault((mode, index), []).append(RdPoint(summary.avg_bpp, summary.avg_quality))

        report = alignment_report(records, config.control.budget.minigop_len)
        alignment_rows.append(
            (
                dataset_name(index),
                mode,
                target,
                len(report.groups),
                report.mean_abs_deviation,
                report.max_ratio_deviation,
            )
        )
        minigop_frames.append(report.to_frame().assign(dataset=dataset_name(index), mode=mode, target=target))
        if not report.is_passing(config.eval.alignment_threshold):
            logging.getLogger().warning(
                "%s %s at %g bpp: mean mini-GOP deviation %.2f%% exceeds %.2f%%",
                mode,
                dataset_name(index),
                target,
                report.mean_abs_deviation * 100,
                config.eval.alignment_threshold * 100,
            )
        if logging.getLogger().isEnabledFor(logging.DEBUG):
            report.print_results(config.eval.alignment_threshold)

    for points in curves.values():
        points.sort(key=lambda point: point.rate)

    write_csv(pd.DataFrame(summary_rows, columns=SUMMARY_COLUMNS), os.path.join(config.run_dir, "evaluation.csv"))
    write_csv(_bd_rate_matrix(config, curves), os.path.join(config.run_dir, "bdrate.csv"))
    write_csv(pd.DataFrame(alignment_rows, columns=ALIGNMENT_COLUMNS), os.path.join(config.run_dir, "alignment.csv"))
    minigops = pd.concat(minigop_frames, ignore_index=True) if minigop_frames else pd.DataFrame()
    write_csv(minigops.reindex(columns=MINIGOP_COLUMNS), os.path.join(config.run_dir, "alignment_minigops.csv"))


def cmd_train(config: ExperimentConfig) -> None:
    """Train the adjustment controller on a seeded synthetic corpus and store weights and the training log."""

    plant = build_plant(config)
    initial = init_weights(config.train.seed, config.train.delta_max)
    log_parameter_count(initial)

    corpus = stream_seeds(config.seed, STREAM_CORPUS, config.train.corpus_size)
    weights, log = train(plant, config.train, corpus, config.control.pi, config.control.budget, initial)

    _make_dir(config.run_dir)
    save_weights(weights, os.path.join(config.run_dir, "weights.json"))
    write_train_log(log, os.path.join(config.run_dir, "train_log.csv"))


def cmd_gradcheck(config: ExperimentConfig) -> None:
    """Compare analytic gradients with finite differences on short episodes.

    Raises
    ------
    GradCheckException
        Relative error of some tensor reaches the tolerance.
    """

    plant = build_plant(config)
    check = config.gradcheck
    episode = dataclasses.replace(config.train, episode_len=check.episode_len)

    worst: Dict[str, float] = {}
    for seed in stream_seeds(config.seed, STREAM_GRADCHECK, check.episodes):
        controller = init_weights(seed, config.train.delta_max, zero_head=False)
        tape, target = run_episode(
            plant, controller, seed, check.lambda_pre, episode, config.control.pi, config.control.budget
        )
        errors = gradient_check(
            plant,
            controller,
            tape,
            config.control.pi.bounds,
            target,
            config.train.loss,
            check.samples,
            check.step,
            seed,
            backward=episode_backward,
        )
        for name, error in errors.items():
            worst[name] = max(worst.get(name, 0.0), error)

    for name, error in worst.items():
        logging.getLogger().info("gradient check %s: max relative error %.3e", name, error)

    _make_dir(config.run_dir)
    write_csv(
        pd.DataFrame(list(worst.items()), columns=GRADCHECK_COLUMNS), os.path.join(config.run_dir, "gradcheck.csv")
    )
    assert_gradients(worst, check.tolerance)
    logging.getLogger().info("gradient check passed (tolerance %g)", check.tolerance)


def cmd_gen_trace(config: ExperimentConfig) -> None:
    """Sample the plant on the configured lambda grid into a trace CSV."""

    plant = build_plant(config)
    grid = np.geomspace(config.trace_grid.lambda_min, config.trace_grid.lambda_max, config.trace_grid.points)
    seed = stream_seeds(config.seed, STREAM_SEQUENCES, 1)[0]
    frames = plant.frames(config.sequence.num_frames, seed)

    _make_dir(config.run_dir)
    dump_trace(plant, frames, [float(lam) for lam in grid], os.path.join(config.run_dir, "trace.csv"))


COMMANDS = {
    "simulate": (cmd_simulate, "encode sequences in closed loop and store per-frame logs"),
    "train": (cmd_train, "train the adjustment controller"),
    "eval": (cmd_eval, "evaluate outputs of a simulation run"),
    "gradcheck": (cmd_gradcheck, "check analytic gradients against finite differences"),
    "gen-trace": (cmd_gen_trace, "dump plant samples on a lambda grid into a trace file"),
}


def _add_command(subparsers, name: str, description: str) -> None:
    parser = subparsers.add_parser(name, help=description)
    parser.add_argument("-c", "--config", required=True, type=str, help="path to the experiment configuration")
    parser.add_argument("-s", "--seed", type=int, default=None, help="override experiment seed")
    parser.add_argument("-o", "--out", type=str, default=None, help="override output directory")
    parser.add_argument("-j", "--jobs", type=int, default=None, help="override number of worker processes")
    if name in ("simulate", "eval"):
        parser.add_argument("-m", "--mode", type=str, default=None, help="run a single mode only")
    if name == "gradcheck":
        parser.add_argument("-t", "--tolerance", type=float, default=None, help="override gradient check tolerance")


def main() -> int:
    """Entry point.

    Returns
    -------
    int
        Exit code.
    """
    parser = argparse.ArgumentParser(prog="ratectl")
    parser.add_argument("-V", "--version", action="version", version="%(prog)s 1.0.0")
    parser.add_argument("-v", "--verbose", action="store_true", default=False, help="enable debug messages")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Commands")

    for name, (_, description) in COMMANDS.items():
        _add_command(subparsers, name, description)

    args = parser.parse_args()
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else logging.INFO)

    try:
        config = load_config(
            args.config,
            seed=args.seed,
            output=args.out,
            mode=getattr(args, "mode", None),
            jobs=args.jobs,
            tolerance=getattr(args, "tolerance", None),
        )
        COMMANDS[args.command][0](config)
    except COMPONENT_EXCEPTIONS as err:
        logging.getLogger().error(err)
        return 1

    return 0
