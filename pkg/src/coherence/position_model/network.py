"""Stacked bidirectional LSTM classifier over encoded sentences.

Parameters are held as float32 (the serialized precision); all arithmetic
runs in float64. Per direction and layer the gate weights live in three
arrays: ``w`` (input_dim, 4H), ``u`` (H, 4H), ``b`` (4H,), with gate blocks
ordered (input, forget, cell, output). Layer outputs are the per-step
concatenation of the forward and backward hidden states; the classifier
readout concatenates the top layer's final forward state with its step-0
backward state.

The recurrence only consumes the unpadded prefix of each sentence: state
updates at padded steps are gated out, and emitted outputs there are zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ..embeddings import EncodedSentence
from ..errors import DegenerateInputError, InvalidLabelError

PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class ModelConfig:
    """Architecture hyperparameters of a position model."""

    q: int
    layer_widths: tuple[int, ...]
    layer_dropouts: tuple[float, ...]
    input_dim: int
    l_max: int
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "layer_widths", tuple(int(w) for w in self.layer_widths))
        object.__setattr__(self, "layer_dropouts", tuple(float(d) for d in self.layer_dropouts))
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if len(self.layer_widths) < 1:
            raise ValueError("need at least one recurrent layer")
        if len(self.layer_widths) != len(self.layer_dropouts):
            raise ValueError("layer_widths and layer_dropouts must pair up")
        if any(w < 1 for w in self.layer_widths):
            raise ValueError("layer widths must be positive")
        if any(not 0.0 <= d < 1.0 for d in self.layer_dropouts):
            raise ValueError("dropout rates must lie in [0, 1)")
        if self.input_dim < 1 or self.l_max < 1:
            raise ValueError("input_dim and l_max must be positive")

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "layer_widths": list(self.layer_widths),
            "layer_dropouts": list(self.layer_dropouts),
            "input_dim": self.input_dim,
            "l_max": self.l_max,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        return cls(
            q=int(data["q"]),
            layer_widths=tuple(data["layer_widths"]),
            layer_dropouts=tuple(data["layer_dropouts"]),
            input_dim=int(data["input_dim"]),
            l_max=int(data["l_max"]),
            seed=int(data["seed"]),
        )


@dataclass
class DirectionParams:
    w: np.ndarray  # (in_dim, 4H)
    u: np.ndarray  # (H, 4H)
    b: np.ndarray  # (4H,)


@dataclass
class LayerParams:
    fwd: DirectionParams
    bwd: DirectionParams


@dataclass
class PositionModel:
    """Parameters of the classifier; immutable except under training."""

    config: ModelConfig
    layers: list[LayerParams]
    w_out: np.ndarray
    b_out: np.ndarray

    def parameter_arrays(self) -> list[np.ndarray]:
        """All parameter arrays in the canonical (serialization) order."""
        arrays: list[np.ndarray] = []
        for layer in self.layers:
            for direction in (layer.fwd, layer.bwd):
                arrays.extend((direction.w, direction.u, direction.b))
        arrays.extend((self.w_out, self.b_out))
        return arrays

    def astype(self, dtype) -> "PositionModel":
        layers = [
            LayerParams(
                fwd=DirectionParams(*(a.astype(dtype) for a in (l.fwd.w, l.fwd.u, l.fwd.b))),
                bwd=DirectionParams(*(a.astype(dtype) for a in (l.bwd.w, l.bwd.u, l.bwd.b))),
            )
            for l in self.layers
        ]
        return PositionModel(
            config=self.config,
            layers=layers,
            w_out=self.w_out.astype(dtype),
            b_out=self.b_out.astype(dtype),
        )


def parameter_shapes(config: ModelConfig) -> list[tuple[int, ...]]:
    """Shapes in canonical order; drives serialization and gradient flattening."""
    shapes: list[tuple[int, ...]] = []
    in_dim = config.input_dim
    for width in config.layer_widths:
        for _ in range(2):
            shapes.extend([(in_dim, 4 * width), (width, 4 * width), (4 * width,)])
        in_dim = 2 * width
    shapes.extend([(in_dim, config.q), (config.q,)])
    return shapes


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int, shape: tuple[int, ...]) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(np.float32)


def _orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n))
    q_mat, r = np.linalg.qr(a)
    q_mat = q_mat * np.sign(np.diag(r))
    return q_mat.astype(np.float32)


def _init_direction(rng: np.random.Generator, in_dim: int, width: int) -> DirectionParams:
    w = np.concatenate([_glorot(rng, in_dim, width, (in_dim, width)) for _ in range(4)], axis=1)
    u = np.concatenate([_orthogonal(rng, width) for _ in range(4)], axis=1)
    b = np.zeros(4 * width, dtype=np.float32)
    b[width : 2 * width] = 1.0  # forget gate opens at init
    return DirectionParams(w=w, u=u, b=b)


def init_model(config: ModelConfig) -> PositionModel:
    """Deterministic initialization: Glorot-uniform gate inputs, orthogonal
    recurrent weights, zero biases except a forget-gate bias of 1."""
    rng = np.random.default_rng(config.seed)
    layers: list[LayerParams] = []
    in_dim = config.input_dim
    for width in config.layer_widths:
        fwd = _init_direction(rng, in_dim, width)
        bwd = _init_direction(rng, in_dim, width)
        layers.append(LayerParams(fwd=fwd, bwd=bwd))
        in_dim = 2 * width
    w_out = _glorot(rng, in_dim, config.q, (in_dim, config.q))
    b_out = np.zeros(config.q, dtype=np.float32)
    return PositionModel(config=config, layers=layers, w_out=w_out, b_out=b_out)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass
class _StepCache:
    x: np.ndarray
    h_prev: np.ndarray
    c_prev: np.ndarray
    gate_i: np.ndarray
    gate_f: np.ndarray
    gate_g: np.ndarray
    gate_o: np.ndarray
    hc: np.ndarray
    m: np.ndarray


@dataclass
class _DirectionCache:
    steps: list[_StepCache]
    w64: np.ndarray
    u64: np.ndarray
    in_dim: int


def _direction_pass(
    x: np.ndarray,
    m: np.ndarray,
    params: DirectionParams,
    collect: bool,
) -> tuple[np.ndarray, _DirectionCache | None]:
    """Run one direction over (B, L, in_dim) inputs with (B, L, 1) masks."""
    batch, length, in_dim = x.shape
    width = params.u.shape[0]
    w64 = np.asarray(params.w, dtype=np.float64)
    u64 = np.asarray(params.u, dtype=np.float64)
    b64 = np.asarray(params.b, dtype=np.float64)
    h = np.zeros((batch, width))
    c = np.zeros((batch, width))
    out = np.empty((batch, length, width))
    steps: list[_StepCache] = []
    for t in range(length):
        xt = x[:, t]
        mt = m[:, t]
        z = xt @ w64 + h @ u64 + b64
        gate_i = _sigmoid(z[:, :width])
        gate_f = _sigmoid(z[:, width : 2 * width])
        gate_g = np.tanh(z[:, 2 * width : 3 * width])
        gate_o = _sigmoid(z[:, 3 * width :])
        c_new = gate_f * c + gate_i * gate_g
        hc = np.tanh(c_new)
        h_new = gate_o * hc
        out[:, t] = mt * h_new
        if collect:
            steps.append(_StepCache(xt, h, c, gate_i, gate_f, gate_g, gate_o, hc, mt))
        c = mt * c_new + (1.0 - mt) * c
        h = mt * h_new + (1.0 - mt) * h
    cache = _DirectionCache(steps=steps, w64=w64, u64=u64, in_dim=in_dim) if collect else None
    return out, cache


def _direction_backprop(
    cache: _DirectionCache,
    d_out: np.ndarray,
    need_dx: bool,
) -> tuple[np.ndarray | None, np.ndarray, np.ndarray, np.ndarray]:
    """BPTT through one direction; ``d_out`` is (B, L, H) w.r.t. emitted outputs."""
    steps = cache.steps
    batch, length, width = d_out.shape
    dw = np.zeros_like(cache.w64)
    du = np.zeros_like(cache.u64)
    db = np.zeros(4 * width)
    dx = np.zeros((batch, length, cache.in_dim)) if need_dx else None
    dh_carry = np.zeros((batch, width))
    dc_carry = np.zeros((batch, width))
    for t in range(length - 1, -1, -1):
        s = steps[t]
        dh_new = s.m * (d_out[:, t] + dh_carry)
        dc_gated = dc_carry
        dc_new = s.m * dc_gated
        d_gate_o = dh_new * s.hc
        dc_new = dc_new + dh_new * s.gate_o * (1.0 - s.hc * s.hc)
        d_gate_i = dc_new * s.gate_g
        d_gate_f = dc_new * s.c_prev
        d_gate_g = dc_new * s.gate_i
        dz = np.concatenate(
            [
                d_gate_i * s.gate_i * (1.0 - s.gate_i),
                d_gate_f * s.gate_f * (1.0 - s.gate_f),
                d_gate_g * (1.0 - s.gate_g * s.gate_g),
                d_gate_o * s.gate_o * (1.0 - s.gate_o),
            ],
            axis=1,
        )
        dw += s.x.T @ dz
        du += s.h_prev.T @ dz
        db += dz.sum(axis=0)
        if need_dx:
            dx[:, t] = dz @ cache.w64.T
        dh_carry = (1.0 - s.m) * dh_carry + dz @ cache.u64.T
        dc_carry = (1.0 - s.m) * dc_gated + dc_new * s.gate_f
    return dx, dw, du, db


@dataclass
class _ForwardCache:
    layer_caches: list[tuple[_DirectionCache, _DirectionCache]]
    dropout_masks: list[np.ndarray | None]
    mask: np.ndarray
    last_index: np.ndarray
    readout: np.ndarray
    probs: np.ndarray
    w_out64: np.ndarray


def forward_batch(
    model: PositionModel,
    data: np.ndarray,
    mask: np.ndarray,
    *,
    dropout_rng: np.random.Generator | None = None,
    collect_cache: bool = False,
) -> tuple[np.ndarray, _ForwardCache | None]:
    """Class probabilities for a batch of encoded sentences.

    ``data`` is (B, L, input_dim), ``mask`` (B, L) with at least one true
    entry per row. Dropout is applied to each layer's output sequence only
    when ``dropout_rng`` is supplied (training mode).
    """
    if data.ndim != 3:
        raise ValueError("data must be (batch, length, input_dim)")
    if data.shape[2] != model.config.input_dim:
        raise ValueError(
            f"input dim {data.shape[2]} does not match model input_dim {model.config.input_dim}"
        )
    lengths = mask.sum(axis=1)
    if np.any(lengths == 0):
        raise DegenerateInputError("encoded sentence has no real tokens")
    x = np.asarray(data, dtype=np.float64)
    m = np.asarray(mask, dtype=np.float64)[:, :, None]
    layer_caches: list[tuple[_DirectionCache, _DirectionCache]] = []
    dropout_masks: list[np.ndarray | None] = []
    for layer, rate in zip(model.layers, model.config.layer_dropouts):
        out_f, cache_f = _direction_pass(x, m, layer.fwd, collect_cache)
        x_rev = x[:, ::-1]
        m_rev = m[:, ::-1]
        out_b_rev, cache_b = _direction_pass(x_rev, m_rev, layer.bwd, collect_cache)
        out = np.concatenate([out_f, out_b_rev[:, ::-1]], axis=2)
        if dropout_rng is not None and rate > 0.0:
            keep = dropout_rng.random(out.shape) >= rate
            dmask = keep / (1.0 - rate)
            out = out * dmask
        else:
            dmask = None
        if collect_cache:
            layer_caches.append((cache_f, cache_b))
            dropout_masks.append(dmask)
        x = out
    width_top = model.config.layer_widths[-1]
    rows = np.arange(x.shape[0])
    last_index = (lengths - 1).astype(np.intp)
    readout = np.concatenate([x[rows, last_index, :width_top], x[:, 0, width_top:]], axis=1)
    w_out64 = np.asarray(model.w_out, dtype=np.float64)
    logits = readout @ w_out64 + np.asarray(model.b_out, dtype=np.float64)
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    cache = None
    if collect_cache:
        cache = _ForwardCache(
            layer_caches=layer_caches,
            dropout_masks=dropout_masks,
            mask=m,
            last_index=last_index,
            readout=readout,
            probs=probs,
            w_out64=w_out64,
        )
    return probs, cache


def forward(model: PositionModel, xs: EncodedSentence) -> np.ndarray:
    """Predicted position distribution for one encoded sentence (length q)."""
    if xs.is_degenerate:
        raise DegenerateInputError("encoded sentence has no real tokens")
    probs, _ = forward_batch(model, xs.data[None, :, :], xs.mask[None, :])
    return probs[0]


def cross_entropy_loss(ppd: np.ndarray, label: int) -> float:
    """Negative log probability of the true quantile, floored at 1e-12."""
    q = ppd.shape[-1]
    if not 0 <= label < q:
        raise InvalidLabelError(f"label {label} outside [0, {q})")
    return float(-np.log(max(float(ppd[label]), PROB_FLOOR)))


def batch_loss(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean cross-entropy over a batch of probability rows."""
    picked = probs[np.arange(probs.shape[0]), labels]
    return float(-np.log(np.maximum(picked, PROB_FLOOR)).mean())


def backward_batch(
    model: PositionModel,
    cache: _ForwardCache,
    labels: np.ndarray,
) -> list[np.ndarray]:
    """Gradients of the mean cross-entropy, in canonical parameter order."""
    batch = cache.probs.shape[0]
    width_top = model.config.layer_widths[-1]
    rows = np.arange(batch)
    dlogits = cache.probs.copy()
    dlogits[rows, labels] -= 1.0
    dlogits /= batch
    dw_out = cache.readout.T @ dlogits
    db_out = dlogits.sum(axis=0)
    dreadout = dlogits @ cache.w_out64.T
    length = cache.mask.shape[1]
    d_out = np.zeros((batch, length, 2 * width_top))
    d_out[rows, cache.last_index, :width_top] = dreadout[:, :width_top]
    d_out[:, 0, width_top:] += dreadout[:, width_top:]
    layer_grads: list[list[np.ndarray]] = []
    for idx in range(len(model.layers) - 1, -1, -1):
        cache_f, cache_b = cache.layer_caches[idx]
        dmask = cache.dropout_masks[idx]
        if dmask is not None:
            d_out = d_out * dmask
        width = model.config.layer_widths[idx]
        need_dx = idx > 0
        dx_f, dw_f, du_f, db_f = _direction_backprop(cache_f, d_out[:, :, :width], need_dx)
        dx_b_rev, dw_b, du_b, db_b = _direction_backprop(
            cache_b, d_out[:, ::-1, width:], need_dx
        )
        layer_grads.append([dw_f, du_f, db_f, dw_b, du_b, db_b])
        if need_dx:
            d_out = dx_f + dx_b_rev[:, ::-1]
    grads: list[np.ndarray] = []
    for layer in reversed(layer_grads):
        grads.extend(layer)
    grads.extend([dw_out, db_out])
    return grads


def loss_and_grads(
    model: PositionModel,
    data: np.ndarray,
    mask: np.ndarray,
    labels: np.ndarray,
    dropout_rng: np.random.Generator | None = None,
) -> tuple[float, np.ndarray, list[np.ndarray]]:
    """One training step's forward/backward: (loss, probs, gradients)."""
    probs, cache = forward_batch(
        model, data, mask, dropout_rng=dropout_rng, collect_cache=True
    )
    loss = batch_loss(probs, labels)
    grads = backward_batch(model, cache, labels)
    return loss, probs, grads


def predict_batch(
    model: PositionModel,
    encoded: Sequence[EncodedSentence],
    chunk_size: int = 256,
) -> np.ndarray:
    """Stacked PPDs for many encoded sentences (inference mode, chunked)."""
    if not encoded:
        return np.zeros((0, model.config.q))
    out = np.empty((len(encoded), model.config.q))
    for start in range(0, len(encoded), chunk_size):
        batch = encoded[start : start + chunk_size]
        data = np.stack([e.data for e in batch])
        mask = np.stack([e.mask for e in batch])
        out[start : start + len(batch)], _ = forward_batch(model, data, mask)
    return out
