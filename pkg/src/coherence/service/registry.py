"""File-backed model registry.

Each registered model lives in its own directory under
``<data_dir>/models/<model_id>/`` holding the binary model container, the
vocabulary, and a small metadata file; ``<data_dir>/registry.json`` is the
manifest. Loading verifies the container checksum and that the stored
vocabulary still matches the hash recorded at save time.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from ..bundle import ModelBundle
from ..corpus import Vocab
from ..embeddings import VectorStore, load_vectors
from ..errors import CoherenceError, VersionMismatchError
from ..modeldir import load_vocab_json, save_vocab_json, write_model_dir
from ..position_model import PositionModel, load_model

MANIFEST_VERSION = 1


class UnknownModelError(CoherenceError):
    """model_id not present in the registry."""


@dataclass(frozen=True)
class RegistryEntry:
    model_id: str
    path: str
    created_at: str
    config: dict
    vocab_hash: str
    corpus_tag: str


save_vocab = save_vocab_json
load_vocab = load_vocab_json


class ModelRegistry:
    """Thread-safe registry over a data directory; survives restarts."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.models_dir = self.data_dir / "models"
        self.manifest_path = self.data_dir / "registry.json"
        self.models_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._entries: dict[str, RegistryEntry] = {}
        self._bundles: dict[str, ModelBundle] = {}
        self._stores: dict[str, VectorStore] = {}
        self._load_manifest()

    def _load_manifest(self) -> None:
        if not self.manifest_path.exists():
            return
        payload = json.loads(self.manifest_path.read_text(encoding="utf-8"))
        for raw in payload.get("models", []):
            entry = RegistryEntry(**raw)
            self._entries[entry.model_id] = entry

    def _write_manifest(self) -> None:
        payload = {
            "version": MANIFEST_VERSION,
            "models": [asdict(e) for e in self._entries.values()],
        }
        self.manifest_path.write_text(json.dumps(payload, indent=2), encoding="utf-8")

    def list_entries(self) -> list[RegistryEntry]:
        with self._lock:
            return sorted(self._entries.values(), key=lambda e: e.created_at)

    def __contains__(self, model_id: str) -> bool:
        with self._lock:
            return model_id in self._entries

    def register(
        self,
        model: PositionModel,
        vocab: Vocab | None,
        vectors_path: str | Path,
        corpus_tag: str = "",
        model_id: str | None = None,
        vector_dim: int = 0,
    ) -> RegistryEntry:
        model_id = model_id or uuid.uuid4().hex[:12]
        vocab_hash = vocab.content_hash() if vocab is not None else ""
        model_dir = self.models_dir / model_id
        if model_dir.exists():
            raise ValueError(f"model directory for {model_id!r} already exists")
        write_model_dir(
            model_dir, model, vocab, vectors_path, corpus_tag=corpus_tag, vector_dim=vector_dim
        )
        entry = RegistryEntry(
            model_id=model_id,
            path=str(model_dir.relative_to(self.data_dir)),
            created_at=datetime.now(timezone.utc).isoformat(),
            config=model.config.to_dict(),
            vocab_hash=vocab_hash,
            corpus_tag=corpus_tag,
        )
        with self._lock:
            if model_id in self._entries:
                raise ValueError(f"model id {model_id!r} already registered")
            self._entries[model_id] = entry
            self._write_manifest()
        return entry

    def get_entry(self, model_id: str) -> RegistryEntry:
        with self._lock:
            if model_id not in self._entries:
                raise UnknownModelError(f"unknown model {model_id!r}")
            return self._entries[model_id]

    def load_bundle(self, model_id: str) -> ModelBundle:
        """Load (and cache) a model with its vocabulary and vector store."""
        with self._lock:
            if model_id in self._bundles:
                return self._bundles[model_id]
        entry = self.get_entry(model_id)
        model_dir = self.data_dir / entry.path
        model, _config = load_model(model_dir / "model.bin")
        vocab = None
        vocab_path = model_dir / "vocab.json"
        if vocab_path.exists():
            vocab = load_vocab(vocab_path)
            if entry.vocab_hash and vocab.content_hash() != entry.vocab_hash:
                raise VersionMismatchError(
                    f"model {model_id!r}: stored vocabulary does not match recorded hash"
                )
        meta = json.loads((model_dir / "meta.json").read_text(encoding="utf-8"))
        store = self._vector_store(meta["vectors_path"])
        bundle = ModelBundle(model=model, store=store, vocab=vocab)
        with self._lock:
            self._bundles[model_id] = bundle
        return bundle

    def _vector_store(self, vectors_path: str) -> VectorStore:
        if not vectors_path:
            raise VersionMismatchError("model has no recorded vector store path")
        with self._lock:
            if vectors_path in self._stores:
                return self._stores[vectors_path]
        store = load_vectors(vectors_path)
        with self._lock:
            self._stores[vectors_path] = store
        return store
