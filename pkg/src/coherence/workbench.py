"""One-call document analysis: everything the service and CLI expose."""

from __future__ import annotations

from dataclasses import dataclass

from .bundle import ModelBundle
from .corpus import Document
from .insights import (
    DEFAULT_JSD_THRESHOLD,
    HeatmapData,
    IncoherenceBoundary,
    SubsectionSegmentation,
    SummarySelection,
    detect_subsections,
    export_heatmap,
    heatmap_payload,
    incoherence_points,
    summarize,
)
from .scoring import CoherenceScore, Ordering, coherence_score, ppd_sequence, reorder


@dataclass(frozen=True)
class AnalysisOptions:
    n_summary: int = 3
    jsd_threshold: float = DEFAULT_JSD_THRESHOLD
    drop_delta: float | None = None


@dataclass(frozen=True)
class AnalysisResult:
    document: Document
    heatmap: HeatmapData
    boundaries: list[IncoherenceBoundary]
    segments: SubsectionSegmentation
    summary: SummarySelection
    coherence: CoherenceScore
    ordering: Ordering
    degenerate_sentences: tuple[int, ...]


def analyze_document(
    bundle: ModelBundle,
    doc: Document,
    options: AnalysisOptions = AnalysisOptions(),
) -> AnalysisResult:
    seq = ppd_sequence(bundle.model, doc, bundle.store, bundle.vocab)
    boundaries = incoherence_points(seq, options.jsd_threshold) if len(seq) >= 2 else []
    return AnalysisResult(
        document=doc,
        heatmap=export_heatmap(seq, doc),
        boundaries=boundaries,
        segments=detect_subsections(seq, options.drop_delta),
        summary=summarize(seq, options.n_summary),
        coherence=coherence_score(seq),
        ordering=reorder(seq),
        degenerate_sentences=seq.degenerate,
    )


def analysis_payload(result: AnalysisResult) -> dict:
    """Heatmap JSON contract plus coherence score and induced ordering."""
    payload = heatmap_payload(result.heatmap, result.boundaries, result.segments, result.summary)
    payload["summary_scores"] = list(result.summary.scores)
    payload["coherence"] = {
        "tau": result.coherence.tau,
        "n": result.coherence.n,
        "degenerate": result.coherence.degenerate,
    }
    payload["ordering"] = {
        "permutation": list(result.ordering.permutation),
        "weighted_quantiles": list(result.ordering.weighted_quantiles),
    }
    payload["degenerate_sentences"] = list(result.degenerate_sentences)
    return payload
