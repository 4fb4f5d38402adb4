"""Synthetic corpora with position-correlated marker tokens.

Useful for demos and end-to-end checks without real data: each sentence
draws most of its tokens from a band marker tied to its relative position,
with band noise so neighbouring positions overlap, plus filler tokens
shared across all positions.
"""

from __future__ import annotations

import numpy as np

from .corpus import Document, Sentence
from .embeddings import VectorStore

N_BANDS = 10
N_FILLERS = 40


def band_tokens() -> list[str]:
    return [f"band{i}" for i in range(N_BANDS)]


def filler_tokens() -> list[str]:
    return [f"filler{i}" for i in range(N_FILLERS)]


def synthetic_vector_store(dim: int = 12, seed: int = 7) -> VectorStore:
    """Random but fixed vectors for every marker and filler token."""
    rng = np.random.default_rng(seed)
    vectors = {
        token: rng.standard_normal(dim).astype(np.float32)
        for token in band_tokens() + filler_tokens()
    }
    return VectorStore(vectors=vectors, dim=dim)


def generate_synthetic_corpus(
    n_docs: int,
    n_sentences: int = 10,
    seed: int = 0,
    marker_prob: float = 0.85,
    band_noise: float = 0.8,
    min_tokens: int = 5,
    max_tokens: int = 8,
) -> list[Document]:
    """Documents whose sentences get noisier band markers the further the
    band sits from the sentence's relative position."""
    if n_sentences < 2:
        raise ValueError("need at least 2 sentences per document")
    rng = np.random.default_rng(seed)
    bands = band_tokens()
    fillers = filler_tokens()
    docs: list[Document] = []
    for d in range(n_docs):
        sentences: list[Sentence] = []
        for i in range(n_sentences):
            center = i / (n_sentences - 1) * (N_BANDS - 1)
            length = int(rng.integers(min_tokens, max_tokens + 1))
            tokens: list[str] = []
            for _ in range(length):
                if rng.random() < marker_prob:
                    band = int(np.clip(round(center + rng.normal(0.0, band_noise)), 0, N_BANDS - 1))
                    tokens.append(bands[band])
                else:
                    tokens.append(fillers[int(rng.integers(N_FILLERS))])
            text = " ".join(tokens)
            sentences.append(Sentence(index=i, text=text, tokens=tuple(tokens)))
        docs.append(Document(id=f"synth-{d:05d}", sentences=tuple(sentences), source_meta={}))
    return docs
