"""On-disk layout of a trained model: model.bin + vocab.json + meta.json."""

from __future__ import annotations

import json
from pathlib import Path

from .bundle import ModelBundle
from .corpus import Vocab
from .embeddings import VectorStore, load_vectors
from .errors import FormatError
from .position_model import PositionModel, load_model, save_model


def save_vocab_json(vocab: Vocab, path: Path) -> None:
    ordered = sorted(vocab.ranks.items(), key=lambda kv: kv[1])
    payload = {"max_size": vocab.max_size, "tokens": [token for token, _ in ordered]}
    path.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")


def load_vocab_json(path: Path) -> Vocab:
    payload = json.loads(path.read_text(encoding="utf-8"))
    return Vocab(
        ranks={token: rank for rank, token in enumerate(payload["tokens"])},
        max_size=int(payload["max_size"]),
    )


def write_model_dir(
    directory: str | Path,
    model: PositionModel,
    vocab: Vocab | None,
    vectors_path: str | Path | None,
    corpus_tag: str = "",
    vector_dim: int = 0,
) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    vocab_hash = vocab.content_hash() if vocab is not None else ""
    save_model(model, directory / "model.bin", vocab_hash=vocab_hash, vector_dim=vector_dim)
    if vocab is not None:
        save_vocab_json(vocab, directory / "vocab.json")
    meta = {
        "vectors_path": str(Path(vectors_path).resolve()) if vectors_path else "",
        "corpus_tag": corpus_tag,
    }
    (directory / "meta.json").write_text(json.dumps(meta), encoding="utf-8")
    return directory


def read_model_dir(
    directory: str | Path,
    store: VectorStore | None = None,
) -> ModelBundle:
    """Load a model directory (or a path to its model.bin); the vector store
    may be supplied to avoid re-reading a large vector file."""
    directory = Path(directory)
    if directory.is_file():
        directory = directory.parent
    model_path = directory / "model.bin"
    if not model_path.exists():
        raise FormatError(f"{directory} does not contain model.bin")
    model, _config = load_model(model_path)
    vocab = None
    vocab_path = directory / "vocab.json"
    if vocab_path.exists():
        vocab = load_vocab_json(vocab_path)
    if store is None:
        meta_path = directory / "meta.json"
        if not meta_path.exists():
            raise FormatError(f"{directory} has no meta.json and no store was supplied")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        vectors_path = meta.get("vectors_path", "")
        if not vectors_path:
            raise FormatError(f"{directory}: no vector store recorded; pass --vectors")
        store = load_vectors(vectors_path)
    return ModelBundle(model=model, store=store, vocab=vocab)
