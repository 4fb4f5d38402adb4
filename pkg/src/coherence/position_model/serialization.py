"""Versioned binary model container.

Layout:

    magic ``PPDM`` | format version (u32 LE) | header length (u32 LE)
    | header JSON (canonical, sorted keys)
    | parameter blocks, float32 little-endian, canonical order
    | SHA-256 of everything preceding it

The header carries the full model configuration plus the vocabulary hash
and word-vector dimension of the training run, so a loader can refuse
incompatible pairings. Round-trips are bit-exact because parameters are
held in float32 in memory.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from ..errors import ChecksumMismatchError, VersionMismatchError
from .network import DirectionParams, LayerParams, ModelConfig, PositionModel, parameter_shapes

MAGIC = b"PPDM"
FORMAT_VERSION = 1
_CHECKSUM_BYTES = 32


def save_model(
    model: PositionModel,
    path: str | Path,
    vocab_hash: str = "",
    vector_dim: int = 0,
) -> None:
    header = dict(model.config.to_dict(), vocab_hash=vocab_hash, vector_dim=int(vector_dim))
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<I", FORMAT_VERSION)
    blob += struct.pack("<I", len(header_bytes))
    blob += header_bytes
    for array in model.parameter_arrays():
        blob += np.ascontiguousarray(array, dtype="<f4").tobytes()
    blob += hashlib.sha256(bytes(blob)).digest()
    Path(path).write_bytes(bytes(blob))


def peek_metadata(path: str | Path) -> dict:
    """Header fields of a model file without loading parameters."""
    raw = Path(path).read_bytes()
    header, _ = _read_header(raw, path)
    return header


def load_model(path: str | Path) -> tuple[PositionModel, ModelConfig]:
    raw = Path(path).read_bytes()
    if len(raw) < _CHECKSUM_BYTES + 12:
        raise VersionMismatchError(f"{path}: file too short to be a model container")
    _check_magic_and_version(raw, path)
    body, recorded = raw[:-_CHECKSUM_BYTES], raw[-_CHECKSUM_BYTES:]
    if hashlib.sha256(body).digest() != recorded:
        raise ChecksumMismatchError(f"{path}: checksum mismatch, file is corrupted")
    header, offset = _read_header(raw, path)
    try:
        config = ModelConfig.from_dict(header)
    except (KeyError, TypeError, ValueError) as exc:
        raise VersionMismatchError(f"{path}: invalid configuration header: {exc}") from exc
    shapes = parameter_shapes(config)
    expected = sum(int(np.prod(s)) for s in shapes) * 4
    payload = body[offset:]
    if len(payload) != expected:
        raise VersionMismatchError(
            f"{path}: parameter payload is {len(payload)} bytes but the declared "
            f"configuration requires {expected}"
        )
    arrays: list[np.ndarray] = []
    cursor = 0
    for shape in shapes:
        n = int(np.prod(shape)) * 4
        arrays.append(
            np.frombuffer(payload[cursor : cursor + n], dtype="<f4").reshape(shape).copy()
        )
        cursor += n
    layers: list[LayerParams] = []
    it = iter(arrays[:-2])
    for _ in config.layer_widths:
        fwd = DirectionParams(w=next(it), u=next(it), b=next(it))
        bwd = DirectionParams(w=next(it), u=next(it), b=next(it))
        layers.append(LayerParams(fwd=fwd, bwd=bwd))
    model = PositionModel(config=config, layers=layers, w_out=arrays[-2], b_out=arrays[-1])
    return model, config


def _check_magic_and_version(raw: bytes, path: str | Path) -> None:
    if raw[:4] != MAGIC:
        raise VersionMismatchError(f"{path}: not a model container (bad magic)")
    (version,) = struct.unpack("<I", raw[4:8])
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{path}: format version {version}, this build reads {FORMAT_VERSION}"
        )


def _read_header(raw: bytes, path: str | Path) -> tuple[dict, int]:
    _check_magic_and_version(raw, path)
    (header_len,) = struct.unpack("<I", raw[8:12])
    start = 12
    end = start + header_len
    if end > len(raw) - _CHECKSUM_BYTES:
        raise VersionMismatchError(f"{path}: truncated header")
    try:
        header = json.loads(raw[start:end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise VersionMismatchError(f"{path}: unreadable header: {exc}") from exc
    return header, end
