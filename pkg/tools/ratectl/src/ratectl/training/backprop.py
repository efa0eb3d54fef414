"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause

Reverse pass of the training objective through the unrolled controller. Base control signals and
input features are constants, gradients flow through the plant derivatives, the lambda clip, the tanh
head, gate fusion, both GRU branches and the embeddings.
"""

from typing import Dict, Mapping

import numpy as np
from ratectl.controller.network import EmbeddingCache, GruCache
from ratectl.controller.weights import HIDDEN, ControllerWeights
from ratectl.pipeline.tape import EpisodeTape
from ratectl.training.losses import LossWeights, TargetBudget, TrainingException


def _delta_gradients(
    tape: EpisodeTape, target: TargetBudget, weights: LossWeights, normalize: bool
) -> np.ndarray:
    """Derivative of the objective with respect to the adjustment of every frame."""

    count = len(tape.frames)
    dist_ref = target.distortion_sum if normalize else 1.0
    rate_ref = target.mean_rate if normalize else 1.0
    mean_rate = np.mean([frame.result.bpp_total for frame in tape.frames])

    steps = np.diff(np.concatenate([[0.0], tape.deltas]))
    grad = 2.0 * steps
    grad[:-1] -= 2.0 * steps[1:]
    grad *= weights.w_smooth

    budget_scale = weights.w_budget * 2.0 * (mean_rate - target.mean_rate) / (rate_ref * rate_ref) / count
    for idx, frame in enumerate(tape.frames):
        if frame.saturated:
            continue
        grad[idx] += weights.w_dist * frame.result.d_dist_d_loglambda / dist_ref
        grad[idx] += budget_scale * frame.result.d_rate_d_loglambda

    return grad


def _embed_backward(
    cache: EmbeddingCache,
    params: Mapping[str, np.ndarray],
    grads: Dict[str, np.ndarray],
    prefix: str,
    d_out: np.ndarray,
) -> None:
    pre_out = d_out * (1.0 - cache.output * cache.output)
    grads[f"{prefix}.w2"] += np.outer(pre_out, cache.hidden)
    grads[f"{prefix}.b2"] += pre_out
    pre_hidden = (params["w2"].T @ pre_out) * (1.0 - cache.hidden * cache.hidden)
    grads[f"{prefix}.w1"] += np.outer(pre_hidden, cache.inputs)
    grads[f"{prefix}.b1"] += pre_hidden


def _gru_backward(
    cache: GruCache, params: Mapping[str, np.ndarray], grads: Dict[str, np.ndarray], prefix: str, d_h_new: np.ndarray
):
    """Reverse of a GRU step, returns gradients of the step input and of the previous hidden state."""

    z, r, cand, h, x = cache.z, cache.r, cache.candidate, cache.h, cache.x
    d_h = d_h_new * (1.0 - z)

    pre_cand = d_h_new * z * (1.0 - cand * cand)
    grads[f"{prefix}.w_h"] += np.outer(pre_cand, x)
    grads[f"{prefix}.u_h"] += np.outer(pre_cand, r * h)
    grads[f"{prefix}.b_h"] += pre_cand
    d_rh = params["u_h"].T @ pre_cand
    d_h += d_rh * r
    d_x = params["w_h"].T @ pre_cand

    pre_z = d_h_new * (cand - h) * z * (1.0 - z)
    pre_r = d_rh * h * r * (1.0 - r)
    for gate, pre in (("z", pre_z), ("r", pre_r)):
        grads[f"{prefix}.w_{gate}"] += np.outer(pre, x)
        grads[f"{prefix}.u_{gate}"] += np.outer(pre, h)
        grads[f"{prefix}.b_{gate}"] += pre
        d_x += params[f"w_{gate}"].T @ pre
        d_h += params[f"u_{gate}"].T @ pre

    return d_x, d_h


def episode_backward(
    tape: EpisodeTape,
    target: TargetBudget,
    weights: LossWeights,
    controller: ControllerWeights,
    normalize: bool = True,
) -> Dict[str, np.ndarray]:
    """Exact gradient of ``episode_loss`` with respect to all controller tensors.

    Parameters
    ----------
    tape : EpisodeTape
        Episode recorded with the controller active.
    target : TargetBudget
        Pre-encoding target.
    weights : LossWeights
        Weights of the objective components.
    controller : ControllerWeights
        Weights the episode was recorded with.
    normalize : bool
        Scale distortion and rate terms by the pre-encoded references.

    Returns
    -------
    dict
        Gradient of every tensor, keyed by the tensor name.

    Raises
    ------
    TrainingException
        Tape is empty or it was recorded without the controller.
    """

    if not tape.frames:
        raise TrainingException("Episode tape contains no P-frame")
    if any(frame.cache is None for frame in tape.frames):
        raise TrainingException("Episode tape was recorded without the adjustment controller")

    grads = controller.zeros_like()
    d_delta = _delta_gradients(tape, target, weights, normalize)
    groups = {prefix: controller.group(prefix) for prefix in ("embed_b", "embed_c", "gru_b", "gru_c")}
    head_w = controller["head.w"]
    gate_w1 = controller["gate.w1"]
    gate_w2 = controller["gate.w2"]

    carry_b = np.zeros(HIDDEN)
    carry_c = np.zeros(HIDDEN)
    for idx in reversed(range(len(tape.frames))):
        cache = tape.frames[idx].cache
        h_b = cache.gru_b.h_new
        h_c = cache.gru_c.h_new

        d_head = d_delta[idx] * controller.delta_max * (1.0 - np.tanh(cache.head) ** 2)
        grads["head.w"] += d_head * cache.fused
        grads["head.b"] += d_head
        d_fused = d_head * head_w

        d_h_b = carry_b + d_fused * (1.0 - cache.gate)
        d_h_c = carry_c + d_fused * cache.gate

        pre_gate = d_fused * (h_c - h_b) * cache.gate * (1.0 - cache.gate)
        grads["gate.w2"] += np.outer(pre_gate, cache.gate_hidden)
        grads["gate.b2"] += pre_gate
        pre_hidden = (gate_w2.T @ pre_gate) * (1.0 - cache.gate_hidden * cache.gate_hidden)
        grads["gate.w1"] += np.outer(pre_hidden, np.concatenate([h_b, h_c]))
        grads["gate.b1"] += pre_hidden
        d_joint = gate_w1.T @ pre_hidden
        d_h_b += d_joint[:HIDDEN]
        d_h_c += d_joint[HIDDEN:]

        d_x_b, carry_b = _gru_backward(cache.gru_b, groups["gru_b"], grads, "gru_b", d_h_b)
        d_x_c, carry_c = _gru_backward(cache.gru_c, groups["gru_c"], grads, "gru_c", d_h_c)
        _embed_backward(cache.embed_b, groups["embed_b"], grads, "embed_b", d_x_b)
        _embed_backward(cache.embed_c, groups["embed_c"], grads, "embed_c", d_x_c)

    return grads
