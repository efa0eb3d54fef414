"""
Author(s): Rate Control Lab <ratectl@example.org>

Copyright: (C) 2026 Rate Control Lab
SPDX-License-Identifier: BSD-3-Clause
"""

from .adam import AdamState, adam_step, step_lr
from .backprop import episode_backward
from .gradcheck import GradCheckException, assert_gradients, gradient_check
from .losses import (
    LossParts,
    LossWeights,
    TargetBudget,
    TrainingException,
    build_target_budget,
    episode_loss,
    replay_loss,
)
from .trainer import TrainConfig, evaluate, run_episode, split_corpus, train, write_train_log
