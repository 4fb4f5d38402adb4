"""From-scratch stacked BiLSTM sentence position classifier."""

from .checks import gradient_check, relative_gradient_error
from .network import (
    ModelConfig,
    PositionModel,
    batch_loss,
    cross_entropy_loss,
    forward,
    forward_batch,
    init_model,
    loss_and_grads,
    parameter_shapes,
    predict_batch,
)
from .serialization import load_model, peek_metadata, save_model
from .training import AdamaxState, EpochStats, TrainConfig, TrainHistory, evaluate, train

__all__ = [
    "AdamaxState",
    "EpochStats",
    "ModelConfig",
    "PositionModel",
    "TrainConfig",
    "TrainHistory",
    "batch_loss",
    "cross_entropy_loss",
    "evaluate",
    "forward",
    "forward_batch",
    "gradient_check",
    "init_model",
    "load_model",
    "loss_and_grads",
    "parameter_shapes",
    "peek_metadata",
    "predict_batch",
    "relative_gradient_error",
    "save_model",
    "train",
]
