"""Minibatch training with the Adamax optimizer.

Runs are fully deterministic given the model's init seed and the train
config's shuffle seed: one generator seeded with ``shuffle_seed`` drives
both batch shuffling and dropout masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..embeddings import EncodedSentence
from ..errors import NonFiniteLossError
from .network import PositionModel, batch_loss, forward_batch, loss_and_grads

Dataset = Sequence[tuple[EncodedSentence, int]]


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    batch_size: int = 32
    learning_rate: float = 0.002
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-7
    shuffle_seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(frozen=True)
class EpochStats:
    train_loss: float
    train_accuracy: float
    val_loss: float | None = None
    val_accuracy: float | None = None


@dataclass
class TrainHistory:
    epochs: list[EpochStats] = field(default_factory=list)
    total_steps: int = 0

    def __len__(self) -> int:
        return len(self.epochs)


class AdamaxState:
    """First moment and infinity-norm accumulators, one pair per parameter."""

    def __init__(self, params: Sequence[np.ndarray]):
        self.m = [np.zeros(p.shape, dtype=np.float64) for p in params]
        self.u = [np.zeros(p.shape, dtype=np.float64) for p in params]
        self.t = 0

    def step(
        self,
        params: Sequence[np.ndarray],
        grads: Sequence[np.ndarray],
        tc: TrainConfig,
    ) -> None:
        self.t += 1
        scale = tc.learning_rate / (1.0 - tc.beta1**self.t)
        for p, g, m, u in zip(params, grads, self.m, self.u):
            m *= tc.beta1
            m += (1.0 - tc.beta1) * g
            np.maximum(tc.beta2 * u, np.abs(g), out=u)
            update = scale * m / (u + tc.epsilon)
            p[...] = (p.astype(np.float64) - update).astype(p.dtype)


def _stack(dataset: Dataset, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    data = np.stack([dataset[i][0].data for i in indices])
    mask = np.stack([dataset[i][0].mask for i in indices])
    labels = np.array([dataset[i][1] for i in indices], dtype=np.intp)
    return data, mask, labels


def evaluate(
    model: PositionModel,
    dataset: Dataset,
    batch_size: int = 256,
) -> tuple[float, float]:
    """(mean loss, accuracy) over a dataset with dropout disabled."""
    total_loss = 0.0
    correct = 0
    n = len(dataset)
    for start in range(0, n, batch_size):
        indices = np.arange(start, min(start + batch_size, n))
        data, mask, labels = _stack(dataset, indices)
        probs, _ = forward_batch(model, data, mask)
        total_loss += batch_loss(probs, labels) * len(indices)
        correct += int((probs.argmax(axis=1) == labels).sum())
    return total_loss / n, correct / n


def train(
    model: PositionModel,
    dataset: Dataset,
    tc: TrainConfig,
    val: Dataset | None = None,
    on_epoch: Callable[[int, EpochStats], None] | None = None,
) -> tuple[PositionModel, TrainHistory]:
    """Backpropagation-through-time minibatch training; mutates and returns ``model``."""
    if not dataset:
        raise ValueError("dataset must be nonempty")
    params = model.parameter_arrays()
    state = AdamaxState(params)
    rng = np.random.default_rng(tc.shuffle_seed)
    use_dropout = any(d > 0.0 for d in model.config.layer_dropouts)
    history = TrainHistory()
    n = len(dataset)
    for epoch in range(tc.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        epoch_correct = 0
        for start in range(0, n, tc.batch_size):
            batch_idx = order[start : start + tc.batch_size]
            data, mask, labels = _stack(dataset, batch_idx)
            loss, probs, grads = loss_and_grads(
                model, data, mask, labels, dropout_rng=rng if use_dropout else None
            )
            if not np.isfinite(loss):
                raise NonFiniteLossError(
                    f"epoch {epoch} step {state.t}: loss={loss!r} "
                    f"(batch of {len(batch_idx)}, lr={tc.learning_rate})"
                )
            state.step(params, grads, tc)
            epoch_loss += loss * len(batch_idx)
            epoch_correct += int((probs.argmax(axis=1) == labels).sum())
        stats = EpochStats(
            train_loss=epoch_loss / n,
            train_accuracy=epoch_correct / n,
        )
        if val:
            val_loss, val_acc = evaluate(model, val)
            stats = EpochStats(stats.train_loss, stats.train_accuracy, val_loss, val_acc)
        history.epochs.append(stats)
        history.total_steps = state.t
        if on_epoch is not None:
            on_epoch(epoch, stats)
    return model, history
