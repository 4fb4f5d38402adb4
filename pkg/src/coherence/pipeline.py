"""End-to-end training pipeline: corpus file to trained model bundle."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .bundle import ModelBundle
from .corpus import Document, build_vocab, load_corpus, split_corpus
from .dataset import build_position_dataset
from .embeddings import load_vectors
from .errors import EmptyDocumentError
from .position_model import (
    EpochStats,
    ModelConfig,
    PositionModel,
    TrainConfig,
    TrainHistory,
    init_model,
    train,
)


@dataclass(frozen=True)
class TrainedArtifacts:
    bundle: ModelBundle
    history: TrainHistory
    n_train_docs: int
    n_val_docs: int


def train_from_corpus(
    corpus_path: str | Path,
    corpus_format: str,
    vectors_path: str | Path,
    *,
    q: int,
    layer_widths: tuple[int, ...],
    layer_dropouts: tuple[float, ...],
    l_max: int,
    seed: int,
    vocab_size: int,
    val_fraction: float,
    tc: TrainConfig,
    on_epoch: Callable[[int, EpochStats], None] | None = None,
) -> TrainedArtifacts:
    """Load, split, encode, and train; the vocabulary is built from the
    training split only."""
    result = load_corpus(corpus_path, corpus_format)
    docs = list(result.documents)
    if not docs:
        raise EmptyDocumentError(f"no usable documents in {corpus_path}")
    store = load_vectors(vectors_path)
    split = split_corpus([d.id for d in docs], val_fraction, 0.0, seed=tc.shuffle_seed)
    by_id = {d.id: d for d in docs}
    train_docs = [by_id[i] for i in split.train]
    val_docs = [by_id[i] for i in split.validation]
    vocab = build_vocab(train_docs, vocab_size)
    config = ModelConfig(
        q=q,
        layer_widths=tuple(layer_widths),
        layer_dropouts=tuple(layer_dropouts),
        input_dim=3 * store.dim,
        l_max=l_max,
        seed=seed,
    )
    train_set = build_position_dataset(train_docs, store, vocab, q, l_max)
    val_set = build_position_dataset(val_docs, store, vocab, q, l_max) if val_docs else None
    if not train_set:
        raise EmptyDocumentError("training split produced no usable sentences")
    model = init_model(config)
    model, history = train(model, train_set, tc, val=val_set, on_epoch=on_epoch)
    return TrainedArtifacts(
        bundle=ModelBundle(model=model, store=store, vocab=vocab),
        history=history,
        n_train_docs=len(train_docs),
        n_val_docs=len(val_docs),
    )
