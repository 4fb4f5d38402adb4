"""Corpus ingestion: segmentation, tokenization, vocabulary, position labels, permutations.

Loaders produce :class:`Document` objects whose sentences are already
tokenized. Sentences that tokenize to nothing are dropped during ingestion
(indices are reassigned), so downstream code can rely on every corpus
sentence carrying at least one token.
"""

from __future__ import annotations

import hashlib
import json
import math
import re
import string
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateDocumentError,
    EmptyDocumentError,
    FormatError,
    InvalidIndexError,
)

CORPUS_FORMATS = ("jsonl", "one_sentence_per_line", "raw_text_dir")

#: Dotted abbreviations that never terminate a sentence (lowercase, final period included).
DEFAULT_ABBREVIATIONS = frozenset(
    {
        "dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "jr.", "sr.", "gen.",
        "rep.", "sen.", "gov.", "vs.", "e.g.", "i.e.", "etc.", "cf.", "al.",
        "fig.", "no.", "vol.", "dept.", "univ.", "inc.", "ltd.", "co.",
        "corp.", "approx.", "est.", "min.", "max.", "u.s.", "u.k.", "u.n.",
        "a.m.", "p.m.", "jan.", "feb.", "mar.", "apr.", "jun.", "jul.",
        "aug.", "sep.", "sept.", "oct.", "nov.", "dec.",
    }
)

_PUNCT = frozenset(string.punctuation)

# Terminator followed by whitespace and an uppercase letter starts a new sentence.
_BOUNDARY = re.compile(r"[.!?](?=\s+[A-Z])")


@dataclass(frozen=True)
class Sentence:
    """One sentence with its 0-based position and lowercased tokens."""

    index: int
    text: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class Document:
    """An ordered sequence of sentences with contiguous indices 0..N-1."""

    id: str
    sentences: tuple[Sentence, ...]
    source_meta: Mapping[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.sentences)

    def all_tokens(self) -> Iterator[str]:
        for sentence in self.sentences:
            yield from sentence.tokens


@dataclass(frozen=True)
class Vocab:
    """Frequency-capped vocabulary; rank 0 is the most frequent token."""

    ranks: Mapping[str, int]
    max_size: int

    def __contains__(self, token: str) -> bool:
        return token in self.ranks

    def __len__(self) -> int:
        return len(self.ranks)

    def rank(self, token: str) -> int | None:
        return self.ranks.get(token)

    def content_hash(self) -> str:
        """Stable digest of the token->rank mapping, for model compatibility checks."""
        ordered = sorted(self.ranks.items(), key=lambda kv: kv[1])
        blob = "\n".join(f"{token}\t{rank}" for token, rank in ordered)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class PermutationSet:
    """Non-identity sentence permutations sampled for one document."""

    document_id: str
    permutations: tuple[tuple[int, ...], ...]
    seed: int


@dataclass(frozen=True)
class CorpusSplit:
    """Disjoint train/validation/test document id lists covering a corpus."""

    train: tuple[str, ...]
    validation: tuple[str, ...]
    test: tuple[str, ...]


@dataclass(frozen=True)
class SkippedRecord:
    """One input record that was dropped during loading, and why."""

    location: str
    reason: str


@dataclass(frozen=True)
class LoadResult:
    documents: tuple[Document, ...]
    skipped: tuple[SkippedRecord, ...]


def tokenize(sentence_text: str) -> list[str]:
    """Lowercase, split on whitespace, and detach edge punctuation.

    A trailing period stays attached when the remaining core still contains
    one, so dotted abbreviations like "u.s." survive intact while ordinary
    words shed their terminator.
    """
    tokens: list[str] = []
    for chunk in sentence_text.lower().split():
        tokens.extend(_split_chunk(chunk))
    return tokens


def _split_chunk(chunk: str) -> list[str]:
    leading: list[str] = []
    while len(chunk) > 1 and chunk[0] in _PUNCT:
        leading.append(chunk[0])
        chunk = chunk[1:]
    trailing: list[str] = []
    while len(chunk) > 1 and chunk[-1] in _PUNCT:
        if chunk[-1] == "." and "." in chunk[:-1]:
            break
        trailing.append(chunk[-1])
        chunk = chunk[:-1]
    parts = leading
    if chunk:
        parts.append(chunk)
    parts.extend(reversed(trailing))
    return parts


def segment_sentences(
    raw_text: str,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> list[Sentence]:
    """Split raw text into sentences on ``.``/``!``/``?`` before whitespace+uppercase.

    The word ending at a candidate boundary is checked (lowercased, terminator
    included) against the abbreviation stoplist; stoplisted words do not split.
    Raises EmptyDocumentError when nothing survives.
    """
    if not raw_text or not raw_text.strip():
        raise EmptyDocumentError("no text to segment")
    cuts: list[int] = []
    for match in _BOUNDARY.finditer(raw_text):
        end = match.end()
        head = raw_text[:end].rsplit(None, 1)
        last_word = head[-1].lower() if head else ""
        if last_word in abbreviations:
            continue
        cuts.append(end)
    pieces: list[str] = []
    start = 0
    for cut in cuts:
        pieces.append(raw_text[start:cut])
        start = cut
    pieces.append(raw_text[start:])
    sentences: list[Sentence] = []
    for piece in pieces:
        text = piece.strip()
        if not text:
            continue
        tokens = tuple(tokenize(text))
        if not tokens:
            continue
        sentences.append(Sentence(index=len(sentences), text=text, tokens=tokens))
    if not sentences:
        raise EmptyDocumentError("no sentence survived segmentation")
    return sentences


def make_document(
    doc_id: str,
    sentence_texts: Sequence[str],
    source_meta: Mapping[str, str] | None = None,
) -> Document:
    """Build a Document from pre-segmented sentences, dropping empty ones."""
    sentences: list[Sentence] = []
    for text in sentence_texts:
        tokens = tuple(tokenize(text))
        if not tokens:
            continue
        sentences.append(Sentence(index=len(sentences), text=text.strip(), tokens=tokens))
    if not sentences:
        raise EmptyDocumentError(f"document {doc_id!r} has no tokenizable sentences")
    return Document(id=doc_id, sentences=tuple(sentences), source_meta=dict(source_meta or {}))


def build_vocab(train_docs: Sequence[Document], max_size: int) -> Vocab:
    """Top ``max_size`` tokens by corpus frequency, ties broken lexicographically."""
    if not train_docs:
        raise ValueError("build_vocab requires at least one training document")
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    counts: Counter[str] = Counter()
    for doc in train_docs:
        counts.update(doc.all_tokens())
    top = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:max_size]
    return Vocab(ranks={token: rank for rank, (token, _) in enumerate(top)}, max_size=max_size)


def quantile_label(sentence_index: int, n_sentences: int, q: int) -> int:
    """Position quantile of a sentence: floor(index * q / N), clamped to q-1."""
    if q < 2:
        raise InvalidIndexError(f"need at least 2 quantiles, got {q}")
    if n_sentences < 1 or not 0 <= sentence_index < n_sentences:
        raise InvalidIndexError(
            f"sentence index {sentence_index} outside document of {n_sentences} sentences"
        )
    return min(sentence_index * q // n_sentences, q - 1)


def generate_permutations(doc: Document, k: int, seed: int) -> PermutationSet:
    """Sample ``k`` uniformly random non-identity sentence orders.

    Duplicates are rejected while the pool of distinct non-identity
    permutations is large enough; once N! - 1 < k they are unavoidable and
    sampling falls back to independent draws.
    """
    n = len(doc.sentences)
    if n < 2:
        raise DegenerateDocumentError(f"document {doc.id!r} has {n} sentence(s); need >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    distinct = math.factorial(n) - 1 if n <= 20 else None
    allow_duplicates = distinct is not None and distinct < k
    rng = np.random.default_rng(seed)
    identity = tuple(range(n))
    seen: set[tuple[int, ...]] = set()
    perms: list[tuple[int, ...]] = []
    while len(perms) < k:
        candidate = tuple(int(i) for i in rng.permutation(n))
        if candidate == identity:
            continue
        if not allow_duplicates and candidate in seen:
            continue
        seen.add(candidate)
        perms.append(candidate)
    return PermutationSet(document_id=doc.id, permutations=tuple(perms), seed=seed)


def split_corpus(
    doc_ids: Sequence[str],
    val_fraction: float,
    test_fraction: float,
    seed: int,
) -> CorpusSplit:
    """Shuffled disjoint split; validation and test sizes are rounded down."""
    if val_fraction < 0 or test_fraction < 0:
        raise ValueError("fractions must be non-negative")
    if val_fraction + test_fraction >= 1:
        raise ValueError("train split would be empty")
    ids = list(doc_ids)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ids))
    n_val = int(len(ids) * val_fraction)
    n_test = int(len(ids) * test_fraction)
    shuffled = [ids[i] for i in order]
    return CorpusSplit(
        validation=tuple(shuffled[:n_val]),
        test=tuple(shuffled[n_val : n_val + n_test]),
        train=tuple(shuffled[n_val + n_test :]),
    )


def load_corpus(path: str | Path, format: str = "jsonl") -> LoadResult:
    """Load documents from ``path`` in one of the supported formats.

    Malformed or empty records are not fatal: they are reported in
    ``LoadResult.skipped`` with their location (file:line for line-oriented
    formats).
    """
    if format not in CORPUS_FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    path = Path(path)
    if format == "jsonl":
        return _load_jsonl(path)
    if format == "one_sentence_per_line":
        return _load_one_per_line(path)
    return _load_raw_dir(path)


def _load_jsonl(path: Path) -> LoadResult:
    if path.is_dir():
        raise FormatError(f"{path} is a directory, expected a JSONL file")
    docs: list[Document] = []
    skipped: list[SkippedRecord] = []
    seen_ids: set[str] = set()
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            location = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                skipped.append(SkippedRecord(location, f"invalid JSON: {exc.msg}"))
                continue
            if not isinstance(record, dict):
                skipped.append(SkippedRecord(location, "record is not an object"))
                continue
            doc_id = record.get("id")
            sentences = record.get("sentences")
            if not isinstance(doc_id, str) or not doc_id:
                skipped.append(SkippedRecord(location, "missing or invalid 'id'"))
                continue
            if doc_id in seen_ids:
                skipped.append(SkippedRecord(location, f"duplicate document id {doc_id!r}"))
                continue
            if not isinstance(sentences, list) or not all(isinstance(s, str) for s in sentences):
                skipped.append(SkippedRecord(location, "missing or invalid 'sentences'"))
                continue
            meta = record.get("meta") or {}
            if not isinstance(meta, dict):
                skipped.append(SkippedRecord(location, "'meta' is not an object"))
                continue
            meta = {str(k): str(v) for k, v in meta.items()}
            reference = record.get("reference")
            if isinstance(reference, list) and all(isinstance(s, str) for s in reference):
                meta.setdefault("reference", "\n".join(reference))
            try:
                doc = make_document(doc_id, sentences, meta)
            except EmptyDocumentError:
                skipped.append(SkippedRecord(location, "no tokenizable sentences"))
                continue
            seen_ids.add(doc_id)
            docs.append(doc)
    return LoadResult(documents=tuple(docs), skipped=tuple(skipped))


def _load_one_per_line(path: Path) -> LoadResult:
    if path.is_dir():
        raise FormatError(f"{path} is a directory, expected a text file")
    docs: list[Document] = []
    skipped: list[SkippedRecord] = []
    block: list[str] = []
    block_start = 1
    block_index = 0

    def flush(end_line: int) -> None:
        nonlocal block, block_index
        if not block:
            return
        doc_id = f"{path.stem}-{block_index}"
        try:
            docs.append(make_document(doc_id, block, {"source": str(path)}))
        except EmptyDocumentError:
            skipped.append(
                SkippedRecord(f"{path}:{block_start}-{end_line}", "no tokenizable sentences")
            )
        block_index += 1
        block = []

    with path.open("r", encoding="utf-8") as handle:
        lineno = 0
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped:
                flush(lineno - 1)
                block_start = lineno + 1
                continue
            block.append(stripped)
        flush(lineno)
    return LoadResult(documents=tuple(docs), skipped=tuple(skipped))


def _load_raw_dir(path: Path) -> LoadResult:
    if not path.is_dir():
        raise FormatError(f"{path} is not a directory")
    docs: list[Document] = []
    skipped: list[SkippedRecord] = []
    for txt in sorted(path.glob("*.txt")):
        raw = txt.read_text(encoding="utf-8")
        try:
            sentences = segment_sentences(raw)
        except EmptyDocumentError:
            skipped.append(SkippedRecord(str(txt), "no tokenizable sentences"))
            continue
        docs.append(
            Document(id=txt.stem, sentences=tuple(sentences), source_meta={"source": str(txt)})
        )
    return LoadResult(documents=tuple(docs), skipped=tuple(skipped))


def save_jsonl(docs: Iterable[Document], path: str | Path) -> None:
    """Write documents in the canonical JSONL corpus format."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for doc in docs:
            record = {
                "id": doc.id,
                "sentences": [s.text for s in doc.sentences],
                "meta": dict(doc.source_meta),
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
