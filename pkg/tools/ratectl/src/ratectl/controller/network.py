"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Forward pass of the dual-branch GRU adjustment controller. Budget features and coding statistics are
embedded separately, processed by their own GRU branch, fused through a learned per-channel gate and
mapped to a bounded log-domain residual which is composed with the base control signal.
"""

import math
from dataclasses import dataclass
from typing import Mapping, Tuple

import numpy as np
from ratectl.control.pi_controller import PiBounds
from ratectl.controller.weights import HIDDEN, ControllerWeights
from scipy.special import expit

# Largest float64 below one, sigmoid and tanh outputs are kept inside their open ranges.
OPEN_BOUND = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True)
class ControllerState:
    """Hidden states of both GRU branches.

    Attributes
    ----------
    h_b : np.ndarray
        Hidden state of the budget branch.
    h_c : np.ndarray
        Hidden state of the coding-statistics branch.
    """

    h_b: np.ndarray
    h_c: np.ndarray

    @classmethod
    def zeros(cls) -> "ControllerState":
        """State at the start of a sequence."""
        return cls(np.zeros(HIDDEN), np.zeros(HIDDEN))


@dataclass(frozen=True)
class EmbeddingCache:
    """Intermediate values of an embedding MLP."""

    inputs: np.ndarray
    hidden: np.ndarray
    output: np.ndarray


@dataclass(frozen=True)
class GruCache:
    """Intermediate values of a single GRU step."""

    x: np.ndarray
    h: np.ndarray
    z: np.ndarray
    r: np.ndarray
    candidate: np.ndarray
    h_new: np.ndarray


@dataclass(frozen=True)
class ForwardCache:
    """Intermediate values of one controller step needed by the reverse pass.

    Attributes
    ----------
    embed_b, embed_c : EmbeddingCache
        Embeddings of both feature vectors.
    gru_b, gru_c : GruCache
        Recurrent steps of both branches.
    gate_hidden : np.ndarray
        Hidden layer of the gate network.
    gate : np.ndarray
        Gate values in (0, 1).
    fused : np.ndarray
        Fused hidden representation.
    head : float
        Output of the head before the tanh bound.
    delta : float
        Residual adjustment.
    """

    embed_b: EmbeddingCache
    embed_c: EmbeddingCache
    gru_b: GruCache
    gru_c: GruCache
    gate_hidden: np.ndarray
    gate: np.ndarray
    fused: np.ndarray
    head: float
    delta: float


def embed(inputs: np.ndarray, params: Mapping[str, np.ndarray]) -> EmbeddingCache:
    """Two-layer embedding MLP with tanh after both layers."""

    hidden = np.tanh(params["w1"] @ inputs + params["b1"])
    output = np.tanh(params["w2"] @ hidden + params["b2"])
    return EmbeddingCache(inputs, hidden, output)


def gru_step(x: np.ndarray, h: np.ndarray, params: Mapping[str, np.ndarray]) -> GruCache:
    """Standard GRU step keeping the intermediate values."""

    z = expit(params["w_z"] @ x + params["u_z"] @ h + params["b_z"])
    r = expit(params["w_r"] @ x + params["u_r"] @ h + params["b_r"])
    candidate = np.tanh(params["w_h"] @ x + params["u_h"] @ (r * h) + params["b_h"])
    h_new = np.clip((1.0 - z) * h + z * candidate, -OPEN_BOUND, OPEN_BOUND)
    return GruCache(x, h, z, r, candidate, h_new)


def gru_cell(x: np.ndarray, h: np.ndarray, params: Mapping[str, np.ndarray]) -> np.ndarray:
    """GRU cell.

    ``z = sigmoid(W_z x + U_z h + b_z)``, ``r = sigmoid(W_r x + U_r h + b_r)``,
    ``candidate = tanh(W_h x + U_h (r * h) + b_h)``, ``h' = (1 - z) * h + z * candidate``.

    Parameters
    ----------
    x : np.ndarray
        Input vector.
    h : np.ndarray
        Hidden state.
    params : dict
        Cell tensors ``w_z, u_z, b_z, w_r, u_r, b_r, w_h, u_h, b_h``.

    Returns
    -------
    np.ndarray
        Updated hidden state.
    """
    return gru_step(x, h, params).h_new


def forward_with_cache(
    weights: ControllerWeights, state: ControllerState, b: np.ndarray, c: np.ndarray
) -> Tuple[float, ControllerState, ForwardCache]:
    """Controller step keeping all intermediate values.

    Parameters
    ----------
    weights : ControllerWeights
        Controller weights.
    state : ControllerState
        Hidden states before the step.
    b : np.ndarray
        Budget-state features.
    c : np.ndarray
        Coding statistics.

    Returns
    -------
    tuple
        Residual adjustment, updated state and the cache of the step.
    """

    embed_b = embed(b, weights.group("embed_b"))
    embed_c = embed(c, weights.group("embed_c"))
    gru_b = gru_step(embed_b.output, state.h_b, weights.group("gru_b"))
    gru_c = gru_step(embed_c.output, state.h_c, weights.group("gru_c"))

    # gate sees the updated hidden states of both branches
    joint = np.concatenate([gru_b.h_new, gru_c.h_new])
    gate_hidden = np.tanh(weights["gate.w1"] @ joint + weights["gate.b1"])
    gate = np.clip(expit(weights["gate.w2"] @ gate_hidden + weights["gate.b2"]), 1.0 - OPEN_BOUND, OPEN_BOUND)
    fused = gate * gru_c.h_new + (1.0 - gate) * gru_b.h_new

    head = float(weights["head.w"] @ fused + weights["head.b"][0])
    bound = float(np.nextafter(weights.delta_max, 0.0))
    delta = min(max(weights.delta_max * math.tanh(head), -bound), bound)

    cache = ForwardCache(embed_b, embed_c, gru_b, gru_c, gate_hidden, gate, fused, head, delta)
    return delta, ControllerState(gru_b.h_new, gru_c.h_new), cache


def controller_forward(
    weights: ControllerWeights, state: ControllerState, b: np.ndarray, c: np.ndarray
) -> Tuple[float, ControllerState, np.ndarray]:
    """Single controller step.

    Parameters
    ----------
    weights : ControllerWeights
        Controller weights.
    state : ControllerState
        Hidden states before the step.
    b : np.ndarray
        Budget-state features.
    c : np.ndarray
        Coding statistics.

    Returns
    -------
    tuple
        Residual adjustment bounded by ``delta_max``, updated state and gate values.
    """

    delta, new_state, cache = forward_with_cache(weights, state, b, c)
    return delta, new_state, cache.gate


def compose_lambda(lambda_base: float, delta: float, bounds: PiBounds) -> float:
    """Compose the final lambda from the base signal and the residual adjustment, clipped to bounds."""
    return bounds.clip_lambda(lambda_base * math.exp(delta))


def is_saturated(lambda_base: float, delta: float, bounds: PiBounds) -> bool:
    """Composed lambda is clipped, residual has no effect on the encoded frame."""
    lam = lambda_base * math.exp(delta)
    return lam < bounds.lambda_min or lam > bounds.lambda_max

