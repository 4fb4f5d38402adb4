"""PPD-based coherence algorithms: weighted quantiles, ordering, scoring."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .corpus import Document, Vocab
from .embeddings import VectorStore, encode_document
from .errors import MismatchedInputsError, TooShortError
from .position_model import PositionModel, forward_batch


@dataclass(frozen=True)
class PPDSequence:
    """One predicted position distribution per sentence, in document order.

    ``rows`` is (N, q); ``degenerate`` lists sentence indices that carried no
    real tokens and were assigned a uniform distribution.
    """

    document_id: str
    rows: np.ndarray
    degenerate: tuple[int, ...] = ()

    def __len__(self) -> int:
        return self.rows.shape[0]

    @property
    def q(self) -> int:
        return self.rows.shape[1]

    def permuted(self, permutation) -> "PPDSequence":
        """The sequence a permuted copy of the document would produce.

        Valid because sentence encodings, and therefore PPDs, do not depend
        on sibling order: permuting sentences permutes rows and nothing else.
        """
        perm = list(permutation)
        remap = {old: new for new, old in enumerate(perm)}
        return PPDSequence(
            document_id=self.document_id,
            rows=self.rows[perm],
            degenerate=tuple(sorted(remap[i] for i in self.degenerate)),
        )


@dataclass(frozen=True)
class Ordering:
    """Sentence indices sorted by weighted quantile, plus the sort keys."""

    permutation: tuple[int, ...]
    weighted_quantiles: tuple[float, ...]


@dataclass(frozen=True)
class CoherenceScore:
    tau: float
    n: int
    degenerate: bool = False


class DiscriminationResult(Enum):
    ORIGINAL = "original"
    PERMUTED = "permuted"


def ppd_sequence(
    model: PositionModel,
    doc: Document,
    store: VectorStore,
    vocab: Vocab | None,
) -> PPDSequence:
    """Run the position model over every sentence of a document.

    Sentences without tokens get a uniform distribution and are flagged
    rather than failing the whole document.
    """
    if len(doc) == 0:
        raise TooShortError(f"document {doc.id!r} has no sentences")
    encoded = encode_document(doc, store, vocab, model.config.l_max)
    q = model.config.q
    rows = np.empty((len(encoded), q))
    live = [i for i, e in enumerate(encoded) if not e.is_degenerate]
    degenerate = tuple(i for i, e in enumerate(encoded) if e.is_degenerate)
    if live:
        data = np.stack([encoded[i].data for i in live])
        mask = np.stack([encoded[i].mask for i in live])
        probs, _ = forward_batch(model, data, mask)
        rows[live] = probs
    for i in degenerate:
        rows[i] = np.full(q, 1.0 / q)
    return PPDSequence(document_id=doc.id, rows=rows, degenerate=degenerate)


def weighted_quantile(ppd: np.ndarray) -> float:
    """Expected 1-based quantile index under a PPD; lies in [1, q]."""
    probs = np.asarray(ppd, dtype=np.float64)
    q = probs.shape[-1]
    return float(np.arange(1, q + 1) @ probs)


def weighted_quantiles(seq: PPDSequence) -> np.ndarray:
    # per-row evaluation keeps these bit-identical to weighted_quantile()
    return np.array([weighted_quantile(row) for row in seq.rows])


def reorder(seq: PPDSequence) -> Ordering:
    """Stable sort of sentence indices by ascending weighted quantile."""
    if len(seq) == 0:
        raise TooShortError("empty PPD sequence")
    wq = weighted_quantiles(seq)
    order = np.argsort(wq, kind="stable")
    return Ordering(
        permutation=tuple(int(i) for i in order),
        weighted_quantiles=tuple(float(v) for v in wq),
    )


def kendall_tau(induced, reference) -> float:
    """Tau-a over all pairs: (concordant - discordant) / (n(n-1)/2).

    Tied pairs on either side contribute zero to the numerator.
    """
    a = np.asarray(induced, dtype=np.float64)
    b = np.asarray(reference, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise MismatchedInputsError("rankings must be equal-length vectors")
    n = a.shape[0]
    if n < 2:
        raise TooShortError(f"need at least 2 elements, got {n}")
    da = np.sign(a[:, None] - a[None, :])
    db = np.sign(b[:, None] - b[None, :])
    upper = np.triu_indices(n, k=1)
    net = float((da[upper] * db[upper]).sum())
    return net / (n * (n - 1) / 2)


def coherence_score(seq: PPDSequence) -> CoherenceScore:
    """Kendall tau between the weighted quantiles in document order and 1..N.

    A one-sentence document cannot be incoherent: it scores 1.0 with the
    degenerate flag set.
    """
    n = len(seq)
    if n == 0:
        raise TooShortError("empty PPD sequence")
    if n == 1:
        return CoherenceScore(tau=1.0, n=1, degenerate=True)
    wq = weighted_quantiles(seq)
    tau = kendall_tau(wq, np.arange(1, n + 1))
    return CoherenceScore(tau=tau, n=n)


def discriminate(seq_original: PPDSequence, seq_permuted: PPDSequence) -> DiscriminationResult:
    """Pick the more coherent of an original/permuted pair.

    Exact ties go to the permuted side, so a tied trial counts against the
    model. Raises when the two sequences do not hold the same PPD multiset.
    """
    if seq_original.rows.shape != seq_permuted.rows.shape:
        raise MismatchedInputsError("sequences differ in shape")
    if not np.array_equal(_canonical_rows(seq_original), _canonical_rows(seq_permuted)):
        raise MismatchedInputsError("sequences are not permutations of the same sentences")
    original = coherence_score(seq_original)
    permuted = coherence_score(seq_permuted)
    if original.tau > permuted.tau:
        return DiscriminationResult.ORIGINAL
    return DiscriminationResult.PERMUTED


def _canonical_rows(seq: PPDSequence) -> np.ndarray:
    order = np.lexsort(seq.rows.T[::-1])
    return seq.rows[order]
