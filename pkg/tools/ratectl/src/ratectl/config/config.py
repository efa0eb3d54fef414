"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Experiment configuration file management. A single YAML document describes the plant, sequences,
controllers, targets, training and gradient check of an experiment.
"""

import dataclasses
import logging
import os
from dataclasses import dataclass, field
from typing import List, Optional

import yaml
from dataclass_wizard import YAMLWizard
from dataclass_wizard.errors import MissingFields, ParseError
from ratectl.control.budget import BudgetSettings
from ratectl.control.pi_controller import PiConfig
from ratectl.pipeline.encoder import MODE_PI_GRU, MODES
from ratectl.plant.data_types import SyntheticCodecParams
from ratectl.training.trainer import TrainConfig

SCHEMA_VERSION = 1
BD_INTERPOLATIONS = ("cubic", "pchip")


class ConfigException(Exception):
    """Experiment configuration is not valid or cannot be read."""


@dataclass(frozen=True)
class TraceCfg(YAMLWizard):
    """Trace plant source and its fixed I-frame cost."""

    path: Optional[str] = None
    iframe_rate: float = 0.5
    iframe_distortion: float = 3e-4

    def check(self) -> None:
        """Check I-frame stub costs."""
        if not self.iframe_rate > 0:
            raise ValueError(f"iframe_rate: must be > 0, got {self.iframe_rate}")
        if not self.iframe_distortion > 0:
            raise ValueError(f"iframe_distortion: must be > 0, got {self.iframe_distortion}")


@dataclass(frozen=True)
class PlantCfg(YAMLWizard):
    """Codec plant section."""

    kind: str = "synthetic"
    synthetic: SyntheticCodecParams = field(default_factory=SyntheticCodecParams)
    trace: TraceCfg = field(default_factory=TraceCfg)

    def check(self) -> None:
        """Check the section of the selected plant."""

        if self.kind not in ("synthetic", "trace"):
            raise ValueError(f"kind: unknown plant '{self.kind}', expected synthetic or trace")
        if self.kind == "synthetic":
            _check_section(self.synthetic, "synthetic")
            return

        _check_section(self.trace, "trace")
        if not self.trace.path:
            raise ValueError("trace.path: required for the trace plant")
        if not os.path.isfile(self.trace.path):
            raise ValueError(f"trace.path: file {self.trace.path} does not exist")


@dataclass(frozen=True)
class SequenceCfg(YAMLWizard):
    """Encoded sequences of the experiment."""

    num_frames: int = 96
    gop_size: int = 32
    sequences: int = 10
    modes: List[str] = field(default_factory=lambda: ["fixed_lambda", "pi_only"])
    fixed_lambda: Optional[float] = None

    def check(self) -> None:
        """Check the sequence parameters."""

        if self.num_frames < 1:
            raise ValueError(f"num_frames: must be >= 1, got {self.num_frames}")
        if self.gop_size < 2:
            raise ValueError(f"gop_size: must be >= 2, got {self.gop_size}")
        if self.sequences < 1:
            raise ValueError(f"sequences: must be >= 1, got {self.sequences}")
        if not self.modes:
            raise ValueError("modes: at least one mode is required")
        for mode in self.modes:
            if mode not in MODES:
                raise ValueError(f"modes: unknown mode '{mode}', expected one of {', '.join(MODES)}")
        if self.fixed_lambda is not None and not self.fixed_lambda > 0:
            raise ValueError(f"fixed_lambda: must be > 0, got {self.fixed_lambda}")


@dataclass(frozen=True)
class ControllerCfg(YAMLWizard):
    """Adjustment controller used by the pi_gru mode."""

    weights: Optional[str] = None


@dataclass(frozen=True)
class ControlCfg(YAMLWizard):
    """Control section."""

    pi: PiConfig = field(default_factory=PiConfig)
    budget: BudgetSettings = field(default_factory=BudgetSettings)
    controller: ControllerCfg = field(default_factory=ControllerCfg)

    def check(self) -> None:
        """Check subsections."""
        _check_section(self.pi, "pi")
        _check_section(self.budget, "budget")


@dataclass(frozen=True)
class GradCheckCfg(YAMLWizard):
    """Gradient check setup."""

    episodes: int = 5
    episode_len: int = 8
    lambda_pre: float = 1024.0
    samples: int = 8
    step: float = 1e-5
    tolerance: float = 1e-4

    def check(self) -> None:
        """Check the gradient check parameters."""

        if self.episodes < 1:
            raise ValueError(f"episodes: must be >= 1, got {self.episodes}")
        if self.episode_len < 1:
            raise ValueError(f"episode_len: must be >= 1, got {self.episode_len}")
        if self.samples < 1:
            raise ValueError(f"samples: must be >= 1, got {self.samples}")
        for name in ("lambda_pre", "step", "tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name}: must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class TraceGridCfg(YAMLWizard):
    """Lambda grid sampled by trace generation."""

    lambda_min: float = 32.0
    lambda_max: float = 4096.0
    points: int = 16

    def check(self) -> None:
        """Check the grid."""

        if not 0 < self.lambda_min < self.lambda_max:
            raise ValueError(f"lambda_min: must satisfy 0 < lambda_min < lambda_max, got {self.lambda_min}")
        if self.points < 2:
            raise ValueError(f"points: must be >= 2, got {self.points}")


@dataclass(frozen=True)
class EvalCfg(YAMLWizard):
    """Evaluation of simulation outputs.

    Attributes
    ----------
    bd_interp : str
        Interpolation of RD curves in BD-rate, ``cubic`` polynomial fit or piecewise ``pchip``.
    alignment_threshold : float
        Mean relative mini-GOP deviation a run is expected to stay within.
    """

    bd_interp: str = "cubic"
    alignment_threshold: float = 0.15

    def check(self) -> None:
        """Check the evaluation parameters."""

        if self.bd_interp not in BD_INTERPOLATIONS:
            raise ValueError(f"bd_interp: must be one of {', '.join(BD_INTERPOLATIONS)}, got {self.bd_interp}")
        if not self.alignment_threshold > 0:
            raise ValueError(f"alignment_threshold: must be > 0, got {self.alignment_threshold}")


# pylint: disable=too-many-instance-attributes
@dataclass(frozen=True)
class ExperimentConfig(YAMLWizard):
    """Experiment configuration.

    Attributes
    ----------
    schema_version : int
        Version of the configuration schema.
    name : str
        Name of the run, outputs are stored in ``<output>/<name>``.
    seed : int
        Seed all randomness of the experiment is derived from.
    output : str
        Output directory.
    jobs : int
        Number of worker processes.
    targets : list
        Sequence target rates in bpp.
    """

    schema_version: int = SCHEMA_VERSION
    name: str = "experiment"
    seed: int = 0
    output: str = "results"
    jobs: int = 1
    targets: List[float] = field(default_factory=lambda: [0.05, 0.08, 0.12, 0.18])
    plant: PlantCfg = field(default_factory=PlantCfg)
    sequence: SequenceCfg = field(default_factory=SequenceCfg)
    control: ControlCfg = field(default_factory=ControlCfg)
    train: TrainConfig = field(default_factory=TrainConfig)
    gradcheck: GradCheckCfg = field(default_factory=GradCheckCfg)
    trace_grid: TraceGridCfg = field(default_factory=TraceGridCfg)
    eval: EvalCfg = field(default_factory=EvalCfg)

    @property
    def run_dir(self) -> str:
        """Directory of the run outputs."""
        return os.path.join(self.output, self.name)

    def check(self) -> None:
        """Check the whole configuration.

        Raises
        ------
        ValueError
            Configuration is not valid, the message starts with the path of the offending key.
        """

        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"schema_version: unsupported version {self.schema_version}, expected {SCHEMA_VERSION}")
        if not self.name:
            raise ValueError("name: must not be empty")
        if self.seed < 0:
            raise ValueError(f"seed: must be >= 0, got {self.seed}")
        if self.jobs < 1:
            raise ValueError(f"jobs: must be >= 1, got {self.jobs}")
        if not self.targets or any(not target > 0 for target in self.targets):
            raise ValueError("targets: must be a nonempty list of positive rates")

        for name in ("plant", "sequence", "control", "train", "gradcheck", "trace_grid", "eval"):
            _check_section(getattr(self, name), name)


def _check_section(section, path: str) -> None:
    try:
        section.check()
    except ValueError as err:
        raise ValueError(f"{path}.{err}") from err


# pylint: disable=too-many-arguments
def load_config(
    path: str,
    seed: Optional[int] = None,
    output: Optional[str] = None,
    mode: Optional[str] = None,
    jobs: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> ExperimentConfig:
    """Read experiment configuration and apply command line overrides.

    Parameters
    ----------
    path : str
        Path to the YAML configuration.
    seed, output, mode, jobs, tolerance : optional
        Overrides of ``seed``, ``output``, ``sequence.modes``, ``jobs`` and ``gradcheck.tolerance``.

    Returns
    -------
    ExperimentConfig
        Validated configuration.

    Raises
    ------
    ConfigException
        File cannot be read or parsed, or the configuration is not valid.
    """

    logging.getLogger().info("Loading configuration from %s", path)
    try:
        config = ExperimentConfig.from_yaml_file(path)
    except OSError as err:
        raise ConfigException(f"Error reading config file {path}: {err}") from err
    except (TypeError, AttributeError, ValueError, ParseError, MissingFields, yaml.YAMLError) as err:
        raise ConfigException(f"Parsing error of config file {path}: {err}") from err
    if not isinstance(config, ExperimentConfig):
        raise ConfigException(f"Config file {path} must contain a single mapping")

    overrides = {}
    if seed is not None:
        overrides["seed"] = seed
        overrides["train"] = dataclasses.replace(config.train, seed=seed)
    if output is not None:
        overrides["output"] = output
    if jobs is not None:
        overrides["jobs"] = jobs
    if mode is not None:
        overrides["sequence"] = dataclasses.replace(config.sequence, modes=[mode])
    if tolerance is not None:
        overrides["gradcheck"] = dataclasses.replace(config.gradcheck, tolerance=tolerance)
    config = dataclasses.replace(config, **overrides)

    try:
        config.check()
    except ValueError as err:
        logging.getLogger().error("Validation error: %s", err)
        raise ConfigException(f"Validation error in {path}: {err}") from err

    logging.getLogger().debug("configuration loaded: %s", config)
    return config


def require_weights(config: ExperimentConfig) -> Optional[str]:
    """Path of the controller weights, required when the pi_gru mode is enabled.

    Raises
    ------
    ConfigException
        pi_gru mode is enabled and the weights file does not exist.
    """

    if MODE_PI_GRU not in config.sequence.modes:
        return None
    path = config.control.controller.weights
    if not path or not os.path.isfile(path):
        raise ConfigException(f"control.controller.weights: file {path} required by mode pi_gru does not exist")
    return path
