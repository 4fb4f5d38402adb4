"""Pretrained word vectors and order-invariant sentence encodings.

Each token is encoded as ``w (+) a (+) (w - a)`` where ``w`` is the token's
pretrained vector (zero when out of vocabulary or store) and ``a`` is the
document-wide average vector. Nothing in the encoding depends on where a
sentence sits in its document, so shuffling sentences cannot change any
sentence's encoding; the document average is accumulated in a canonical
token order to make that invariance hold bit for bit.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Document, Sentence, Vocab
from .errors import FormatError


@dataclass(frozen=True)
class VectorStore:
    """Immutable token -> dense vector map.

    ``word_restriction``, when present, limits which tokens may contribute a
    word-level vector; document averages always draw on the full store.
    """

    vectors: dict[str, np.ndarray]
    dim: int
    word_restriction: frozenset[str] | None = None

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)


@dataclass(frozen=True)
class EncodedSentence:
    """Fixed-length token encoding matrix plus a validity mask.

    ``data`` is (l_max, 3d) float32 with all-zero rows beyond the real
    tokens; ``mask`` marks the min(L, l_max) real rows.
    """

    data: np.ndarray
    mask: np.ndarray

    @property
    def is_degenerate(self) -> bool:
        return not bool(self.mask.any())


def load_vectors(path: str | Path, restrict_to: Vocab | None = None) -> VectorStore:
    """Parse a textual vector file: optional ``<count> <dim>`` header, then
    one ``<token> <f1> ... <f_dim>`` line per vector.

    Keys are lowercased to match the tokenizer; when a file carries both
    cased and lowercase forms the earlier line wins (vector files are
    conventionally ordered by frequency).
    """
    path = Path(path)
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and _all_ints(parts):
                dim = int(parts[1])
                continue
            token, values = parts[0].lower(), parts[1:]
            if dim is None:
                dim = len(values)
                if dim == 0:
                    raise FormatError(f"{path}:{lineno}: no vector components")
            if len(values) != dim:
                raise FormatError(
                    f"{path}:{lineno}: expected {dim} components, got {len(values)}"
                )
            if token in vectors:
                continue
            try:
                vec = np.array(values, dtype=np.float32)
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
            vectors[token] = vec
    if dim is None:
        raise FormatError(f"{path}: empty vector file")
    restriction = frozenset(restrict_to.ranks) if restrict_to is not None else None
    return VectorStore(vectors=vectors, dim=dim, word_restriction=restriction)


def _all_ints(parts: list[str]) -> bool:
    try:
        [int(p) for p in parts]
    except ValueError:
        return False
    return True


def doc_average(doc: Document, store: VectorStore) -> np.ndarray:
    """Mean vector over every in-store token of the document.

    Accumulation runs over unique tokens in sorted order so the result is a
    pure function of the token multiset: permuting sentences cannot change
    a single bit of it. Returns the zero vector when nothing is in store.
    """
    counts = Counter(doc.all_tokens())
    acc = np.zeros(store.dim, dtype=np.float64)
    total = 0
    for token in sorted(counts):
        vec = store.get(token)
        if vec is None:
            continue
        n = counts[token]
        acc += n * vec.astype(np.float64)
        total += n
    if total == 0:
        return np.zeros(store.dim, dtype=np.float32)
    return (acc / total).astype(np.float32)


def encode_token(
    token: str,
    doc_avg: np.ndarray,
    store: VectorStore,
    vocab: Vocab | None,
) -> np.ndarray:
    """Concatenate word vector, document average, and their difference (3d)."""
    word = None
    if vocab is None or token in vocab:
        if store.word_restriction is None or token in store.word_restriction:
            word = store.get(token)
    if word is None:
        word = np.zeros(store.dim, dtype=np.float32)
    return np.concatenate([word, doc_avg, word - doc_avg])


def encode_sentence(
    sentence: Sentence,
    doc_avg: np.ndarray,
    store: VectorStore,
    vocab: Vocab | None,
    l_max: int,
) -> EncodedSentence:
    """Encode the first ``l_max`` tokens; shorter sentences are zero-padded."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    data = np.zeros((l_max, 3 * store.dim), dtype=np.float32)
    mask = np.zeros(l_max, dtype=bool)
    for row, token in enumerate(sentence.tokens[:l_max]):
        data[row] = encode_token(token, doc_avg, store, vocab)
        mask[row] = True
    return EncodedSentence(data=data, mask=mask)


def encode_document(
    doc: Document,
    store: VectorStore,
    vocab: Vocab | None,
    l_max: int,
) -> list[EncodedSentence]:
    """Encode every sentence of a document against its shared average vector."""
    avg = doc_average(doc, store)
    return [encode_sentence(s, avg, store, vocab, l_max) for s in doc.sentences]


def save_vectors(store: VectorStore, path: str | Path, header: bool = True) -> None:
    """Write a store back out in the textual vector format."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        if header:
            handle.write(f"{len(store.vectors)} {store.dim}\n")
        for token in sorted(store.vectors):
            values = " ".join(repr(float(v)) for v in store.vectors[token])
            handle.write(f"{token} {values}\n")
