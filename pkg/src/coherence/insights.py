"""Reader- and writer-facing analyses over PPD sequences.

Covers the heuristics a heatmap makes visually obvious: which sentences
look introductory (summarization), where adjacent predictions disagree
(incoherence boundaries), and where the introductory-to-conclusory
progression restarts (subsection cuts).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corpus import Document
from .errors import MismatchedInputsError, TooShortError
from .scoring import PPDSequence, weighted_quantiles

LN2 = float(np.log(2.0))
DEFAULT_JSD_THRESHOLD = 0.2


@dataclass(frozen=True)
class SummarySelection:
    """Top sentences by first-quantile probability, best first."""

    n: int
    selected: tuple[int, ...]
    scores: tuple[float, ...]


@dataclass(frozen=True)
class IncoherenceBoundary:
    """Adjacent sentence pair whose PPDs diverge more than the threshold."""

    between: tuple[int, int]
    divergence: float


@dataclass(frozen=True)
class SubsectionSegmentation:
    """Inclusive [start, end] index ranges partitioning the document."""

    segments: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class HeatmapData:
    rows: np.ndarray
    weighted_quantiles: tuple[float, ...]
    sentence_texts: tuple[str, ...]


def summarize(seq: PPDSequence, n: int) -> SummarySelection:
    """Select the ``n`` sentences with the highest first-quantile probability.

    Ties break toward the earlier sentence; output is ordered by descending
    score (selection priority), not document position.
    """
    if n < 1:
        raise ValueError("summary size must be >= 1")
    scores = seq.rows[:, 0]
    order = sorted(range(len(seq)), key=lambda i: (-scores[i], i))
    chosen = order[: min(n, len(seq))]
    return SummarySelection(
        n=n,
        selected=tuple(chosen),
        scores=tuple(float(scores[i]) for i in chosen),
    )


def jensen_shannon(p, q) -> float:
    """Jensen-Shannon divergence with natural log; bounded by ln 2."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise MismatchedInputsError("distributions differ in length")
    m = 0.5 * (p + q)
    return 0.5 * _kl(p, m) + 0.5 * _kl(q, m)


def _kl(p: np.ndarray, m: np.ndarray) -> float:
    live = p > 0.0
    return float(np.sum(p[live] * np.log(p[live] / m[live])))


def incoherence_points(
    seq: PPDSequence,
    threshold: float = DEFAULT_JSD_THRESHOLD,
) -> list[IncoherenceBoundary]:
    """Boundaries between consecutive sentences whose PPDs diverge > threshold."""
    if len(seq) < 2:
        raise TooShortError("need at least 2 sentences to have a boundary")
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    out: list[IncoherenceBoundary] = []
    for i in range(len(seq) - 1):
        div = jensen_shannon(seq.rows[i], seq.rows[i + 1])
        if div > threshold:
            out.append(IncoherenceBoundary(between=(i, i + 1), divergence=div))
    return out


def detect_subsections(seq: PPDSequence, drop_delta: float | None = None) -> SubsectionSegmentation:
    """Cut wherever the weighted quantile resets by more than ``drop_delta``.

    A drop from conclusory back to introductory marks the start of a new
    coherent subsection. Default delta is q/3.
    """
    if len(seq) == 0:
        raise TooShortError("empty PPD sequence")
    if drop_delta is None:
        drop_delta = seq.q / 3.0
    if drop_delta <= 0:
        raise ValueError("drop_delta must be positive")
    wq = weighted_quantiles(seq)
    cuts = [i for i in range(1, len(seq)) if wq[i] <= wq[i - 1] - drop_delta]
    bounds = [0, *cuts, len(seq)]
    segments = tuple((bounds[i], bounds[i + 1] - 1) for i in range(len(bounds) - 1))
    return SubsectionSegmentation(segments=segments)


def export_heatmap(seq: PPDSequence, doc: Document) -> HeatmapData:
    """Package PPD rows, weighted quantiles, and texts for rendering."""
    if len(seq) != len(doc):
        raise MismatchedInputsError(
            f"{len(seq)} PPD rows vs {len(doc)} sentences in document {doc.id!r}"
        )
    wq = weighted_quantiles(seq)
    return HeatmapData(
        rows=seq.rows.copy(),
        weighted_quantiles=tuple(float(v) for v in wq),
        sentence_texts=tuple(s.text for s in doc.sentences),
    )


def heatmap_payload(
    heatmap: HeatmapData,
    boundaries: list[IncoherenceBoundary],
    segments: SubsectionSegmentation,
    summary: SummarySelection,
) -> dict:
    """The heatmap JSON contract consumed by the webapp and plot command."""
    return {
        "sentences": list(heatmap.sentence_texts),
        "ppd": [[float(v) for v in row] for row in heatmap.rows],
        "wq": list(heatmap.weighted_quantiles),
        "boundaries": [[b.between[0], b.between[1], b.divergence] for b in boundaries],
        "segments": [[s, e] for s, e in segments.segments],
        "summary": list(summary.selected),
    }


def heatmap_payload_json(payload: dict) -> str:
    return json.dumps(payload, ensure_ascii=False)
