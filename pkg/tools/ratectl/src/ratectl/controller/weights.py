"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Learnable tensors of the dual-branch GRU controller, their initialization and the JSON weight file.
"""

import json
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

HIDDEN = 64
WEIGHTS_FORMAT_VERSION = 1
# Parameter count of the reference dual-GRU controller.
REFERENCE_PARAMETERS = 88200


class WeightsException(Exception):
    """Weights are not valid or cannot be stored/loaded."""


def _gru_specs(prefix: str) -> Dict[str, Tuple[Tuple[int, ...], int]]:
    specs = {}
    for gate in ("z", "r", "h"):
        specs[f"{prefix}.w_{gate}"] = ((HIDDEN, HIDDEN), HIDDEN)
        specs[f"{prefix}.u_{gate}"] = ((HIDDEN, HIDDEN), HIDDEN)
        specs[f"{prefix}.b_{gate}"] = ((HIDDEN,), HIDDEN)
    return specs


def _mlp_specs(prefix: str, inputs: int) -> Dict[str, Tuple[Tuple[int, ...], int]]:
    return {
        f"{prefix}.w1": ((HIDDEN, inputs), inputs),
        f"{prefix}.b1": ((HIDDEN,), inputs),
        f"{prefix}.w2": ((HIDDEN, HIDDEN), HIDDEN),
        f"{prefix}.b2": ((HIDDEN,), HIDDEN),
    }


# Tensor name -> (shape, fan-in used for initialization). Order is the initialization order.
TENSOR_SPECS = {
    **_mlp_specs("embed_b", 5),
    **_mlp_specs("embed_c", 4),
    **_gru_specs("gru_b"),
    **_gru_specs("gru_c"),
    **_mlp_specs("gate", 2 * HIDDEN),
    "head.w": ((HIDDEN,), HIDDEN),
    "head.b": ((1,), HIDDEN),
}


@dataclass
class ControllerWeights:
    """All learnable tensors of the controller plus its output bound.

    Attributes
    ----------
    tensors : dict
        Tensor name to array, names and shapes as in ``TENSOR_SPECS``.
    delta_max : float
        Bound of the residual adjustment.
    seed : int
        Seed the weights were initialized with.
    """

    tensors: Dict[str, np.ndarray]
    delta_max: float = 0.2
    seed: int = 0

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def group(self, prefix: str) -> Dict[str, np.ndarray]:
        """Tensors of a single layer group with the group prefix stripped, e.g. ``gru_b`` -> ``{"w_z": ...}``."""
        return {name.split(".", 1)[1]: value for name, value in self.tensors.items() if name.startswith(prefix + ".")}

    def copy(self) -> "ControllerWeights":
        """Deep copy of the weights."""
        tensors = {name: value.copy() for name, value in self.tensors.items()}
        return ControllerWeights(tensors, self.delta_max, self.seed)

    def zeros_like(self) -> Dict[str, np.ndarray]:
        """Zero tensors of the same shapes, used as gradient accumulators."""
        return {name: np.zeros_like(value) for name, value in self.tensors.items()}

    def check(self) -> None:
        """Check names, shapes and values.

        Raises
        ------
        WeightsException
            A tensor is missing, has an unexpected shape or a non-finite value.
        """

        if not (math.isfinite(self.delta_max) and self.delta_max > 0):
            raise WeightsException(f"delta_max: must be a finite positive number, got {self.delta_max}")

        unknown = sorted(set(self.tensors) - set(TENSOR_SPECS))
        if unknown:
            raise WeightsException(f"Unknown tensors: {', '.join(unknown)}")

        for name, (shape, _) in TENSOR_SPECS.items():
            if name not in self.tensors:
                raise WeightsException(f"Tensor {name} is missing")
            if self.tensors[name].shape != shape:
                raise WeightsException(f"Tensor {name} has shape {self.tensors[name].shape}, expected {shape}")
            if not np.all(np.isfinite(self.tensors[name])):
                raise WeightsException(f"Tensor {name} contains non-finite values")


def init_weights(seed: int, delta_max: float = 0.2, zero_head: bool = True) -> ControllerWeights:
    """Initialize weights uniformly in +-1/sqrt(fan_in).

    Parameters
    ----------
    seed : int
        Seed of the generator.
    delta_max : float
        Bound of the residual adjustment.
    zero_head : bool
        Zero the output head so the controller starts with zero adjustment.

    Returns
    -------
    ControllerWeights
        Initialized weights.
    """

    rng = np.random.default_rng(seed)
    tensors = {}
    for name, (shape, fan_in) in TENSOR_SPECS.items():
        bound = 1.0 / math.sqrt(fan_in)
        tensors[name] = rng.uniform(-bound, bound, size=shape)

    if zero_head:
        tensors["head.w"] = np.zeros(TENSOR_SPECS["head.w"][0])
        tensors["head.b"] = np.zeros(TENSOR_SPECS["head.b"][0])

    return ControllerWeights(tensors, delta_max, seed)


def parameter_count(weights: Optional[ControllerWeights] = None) -> int:
    """Total number of scalar parameters, of the given weights or of the default architecture."""

    if weights is None:
        return int(sum(np.prod(shape) for shape, _ in TENSOR_SPECS.values()))
    return int(sum(value.size for value in weights.tensors.values()))


def log_parameter_count(weights: ControllerWeights) -> None:
    """Log size of the controller together with its difference to the reference controller size."""

    count = parameter_count(weights)
    logging.getLogger().info(
        "controller has %d parameters (reference controller: %d, difference %+d)",
        count,
        REFERENCE_PARAMETERS,
        count - REFERENCE_PARAMETERS,
    )


def save_weights(weights: ControllerWeights, path: str) -> None:
    """Store weights into a JSON document.

    Parameters
    ----------
    weights : ControllerWeights
        Weights to be stored.
    path : str
        Path to the output file.

    Raises
    ------
    WeightsException
        Unable to write the file.
    """

    document = {
        "format_version": WEIGHTS_FORMAT_VERSION,
        "seed": int(weights.seed),
        "delta_max": float(weights.delta_max),
        "shapes": {name: list(value.shape) for name, value in weights.tensors.items()},
        "tensors": {name: value.tolist() for name, value in weights.tensors.items()},
    }
    try:
        with open(path, "w", encoding="utf-8") as out_file:
            json.dump(document, out_file, indent=1)
    except OSError as err:
        raise WeightsException(f"Unable to write weights file: {path}") from err
    logging.getLogger().info("controller weights written to %s", path)


def load_weights(path: str) -> ControllerWeights:
    """Load weights from a JSON document.

    Parameters
    ----------
    path : str
        Path to the weights file.

    Returns
    -------
    ControllerWeights
        Validated weights.

    Raises
    ------
    WeightsException
        File cannot be read or it does not conform to the schema.
    """

    try:
        with open(path, "r", encoding="utf-8") as in_file:
            document = json.load(in_file)
    except (OSError, json.JSONDecodeError) as err:
        raise WeightsException(f"Unable to read weights file: {path}") from err

    if not isinstance(document, dict):
        raise WeightsException(f"Weights file {path} does not contain a JSON object")
    for key in ("format_version", "seed", "delta_max", "shapes", "tensors"):
        if key not in document:
            raise WeightsException(f"Weights file {path} is missing key '{key}'")
    if document["format_version"] != WEIGHTS_FORMAT_VERSION:
        raise WeightsException(f"Unsupported weights format version: {document['format_version']}")

    tensors = {}
    for name, values in document["tensors"].items():
        try:
            tensor = np.array(values, dtype=np.float64)
        except (TypeError, ValueError) as err:
            raise WeightsException(f"Tensor {name} is not a numeric array") from err
        declared = tuple(document["shapes"].get(name, ()))
        if tensor.shape != declared:
            raise WeightsException(f"Tensor {name} has shape {tensor.shape}, declared {declared}")
        tensors[name] = tensor

    weights = ControllerWeights(tensors, float(document["delta_max"]), int(document["seed"]))
    weights.check()
    logging.getLogger().debug("controller weights loaded from %s", path)
    return weights
