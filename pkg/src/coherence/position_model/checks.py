"""Finite-difference verification of the analytic gradients."""

from __future__ import annotations

import numpy as np

from ..embeddings import EncodedSentence
from .network import PositionModel, batch_loss, forward_batch, loss_and_grads


def relative_gradient_error(g_analytic: float, g_numeric: float) -> float:
    """|ga - gn| / max(|ga| + |gn|, 1e-8)."""
    return abs(g_analytic - g_numeric) / max(abs(g_analytic) + abs(g_numeric), 1e-8)


def gradient_check(
    model: PositionModel,
    sample: tuple[EncodedSentence, int],
    epsilon: float = 1e-4,
    n_params: int = 200,
    seed: int = 0,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    A float64 copy of the model is probed so the perturbations are exact;
    dropout is never applied. Checks a random subsample of
    min(n_params, total parameters) coordinates.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    xs, label = sample
    work = model.astype(np.float64)
    data = xs.data[None, :, :]
    mask = xs.mask[None, :]
    labels = np.array([label], dtype=np.intp)
    _, _, grads = loss_and_grads(work, data, mask, labels)
    params = work.parameter_arrays()
    sizes = [p.size for p in params]
    total = int(np.sum(sizes))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(total, size=min(n_params, total), replace=False)
    offsets = np.cumsum([0] + sizes)

    def loss_at() -> float:
        probs, _ = forward_batch(work, data, mask)
        return batch_loss(probs, labels)

    worst = 0.0
    for flat in chosen:
        k = int(np.searchsorted(offsets, flat, side="right") - 1)
        local = int(flat - offsets[k])
        array = params[k]
        original = array.flat[local]
        array.flat[local] = original + epsilon
        f_plus = loss_at()
        array.flat[local] = original - epsilon
        f_minus = loss_at()
        array.flat[local] = original
        g_numeric = (f_plus - f_minus) / (2.0 * epsilon)
        g_analytic = float(grads[k].flat[local])
        worst = max(worst, relative_gradient_error(g_analytic, g_numeric))
    return worst
