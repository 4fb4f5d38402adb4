"""Turn labeled corpora into position-classification training samples."""

from __future__ import annotations

from typing import Sequence

from .corpus import Document, Vocab, quantile_label
from .embeddings import EncodedSentence, VectorStore, encode_document


def build_position_dataset(
    docs: Sequence[Document],
    store: VectorStore,
    vocab: Vocab | None,
    q: int,
    l_max: int,
) -> list[tuple[EncodedSentence, int]]:
    """One (encoding, quantile label) sample per sentence; degenerate
    encodings (no in-range tokens) are skipped."""
    samples: list[tuple[EncodedSentence, int]] = []
    for doc in docs:
        n = len(doc)
        encoded = encode_document(doc, store, vocab, l_max)
        for sentence, enc in zip(doc.sentences, encoded):
            if enc.is_degenerate:
                continue
            samples.append((enc, quantile_label(sentence.index, n, q)))
    return samples
