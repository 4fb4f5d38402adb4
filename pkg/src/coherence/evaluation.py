"""Benchmark metrics and drivers: reordering, order discrimination, ROUGE."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bundle import ModelBundle
from .corpus import Document, generate_permutations, tokenize
from .errors import DegenerateDocumentError, MismatchedInputsError
from .insights import summarize
from .scoring import (
    DiscriminationResult,
    Ordering,
    PPDSequence,
    discriminate,
    kendall_tau,
    ppd_sequence,
    reorder,
)

REPORT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ReorderMetrics:
    position_accuracy: float
    mean_tau: float


@dataclass(frozen=True)
class DiscriminationMetrics:
    accuracy: float
    trials: int
    skipped_documents: int = 0


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, overlap: float, candidate_total: int, reference_total: int) -> "RougeScore":
        precision = overlap / candidate_total if candidate_total else 0.0
        recall = overlap / reference_total if reference_total else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(precision=precision, recall=recall, f1=f1)


def reorder_metrics(predicted: Ordering, doc: Document) -> ReorderMetrics:
    """Positional accuracy and Kendall tau of an induced ordering vs truth."""
    n = len(doc)
    perm = predicted.permutation
    if len(perm) != n:
        raise MismatchedInputsError(f"ordering of {len(perm)} vs document of {n} sentences")
    correct = sum(1 for slot, original in enumerate(perm) if slot == original)
    tau = kendall_tau(list(perm), list(range(n)))
    return ReorderMetrics(position_accuracy=correct / n, mean_tau=tau)


def discrimination_accuracy(
    bundle: ModelBundle,
    docs: Sequence[Document],
    k: int = 20,
    seed: int = 0,
) -> DiscriminationMetrics:
    """Original-vs-permuted accuracy over k permutations per document.

    PPDs are order-invariant, so each permuted document's sequence is the
    original sequence with rows permuted; the model runs once per document.
    Documents too short to permute are excluded and counted.
    """
    correct = 0
    trials = 0
    skipped = 0
    for index, doc in enumerate(docs):
        try:
            perms = generate_permutations(doc, k, seed=_per_doc_seed(seed, index))
        except DegenerateDocumentError:
            skipped += 1
            continue
        seq = ppd_sequence(bundle.model, doc, bundle.store, bundle.vocab)
        for perm in perms.permutations:
            trials += 1
            if discriminate(seq, seq.permuted(perm)) is DiscriminationResult.ORIGINAL:
                correct += 1
    accuracy = correct / trials if trials else 0.0
    return DiscriminationMetrics(accuracy=accuracy, trials=trials, skipped_documents=skipped)


def _per_doc_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate_tokens: Sequence[str], reference_tokens: Sequence[str], n: int) -> RougeScore:
    """Clipped n-gram overlap; empty inputs yield an all-zero score."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = _ngrams(candidate_tokens, n)
    ref = _ngrams(reference_tokens, n)
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    if not cand_total or not ref_total:
        return RougeScore(0.0, 0.0, 0.0)
    overlap = sum(min(count, cand[gram]) for gram, count in ref.items())
    return RougeScore.from_counts(overlap, cand_total, ref_total)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b, start=1):
            if token == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(candidate_tokens: Sequence[str], reference_tokens: Sequence[str]) -> RougeScore:
    """Longest-common-subsequence recall/precision/F1."""
    if not candidate_tokens or not reference_tokens:
        return RougeScore(0.0, 0.0, 0.0)
    lcs = _lcs_length(candidate_tokens, reference_tokens)
    return RougeScore.from_counts(lcs, len(candidate_tokens), len(reference_tokens))


def rouge_all(candidate_tokens: Sequence[str], reference_tokens: Sequence[str]) -> dict[str, RougeScore]:
    return {
        "rouge1": rouge_n(candidate_tokens, reference_tokens, 1),
        "rouge2": rouge_n(candidate_tokens, reference_tokens, 2),
        "rougeL": rouge_l(candidate_tokens, reference_tokens),
    }


def run_benchmark(
    task: str,
    bundle: ModelBundle,
    docs: Sequence[Document],
    *,
    k: int = 20,
    seed: int = 0,
    folds: int | None = None,
    summary_n: int = 3,
) -> dict:
    """Run one benchmark task and return a versioned machine-readable report."""
    if task == "reordering":
        return _benchmark_reordering(bundle, docs)
    if task == "discrimination":
        return _benchmark_discrimination(bundle, docs, k=k, seed=seed, folds=folds)
    if task == "summarization":
        return _benchmark_summarization(bundle, docs, summary_n=summary_n)
    raise ValueError(f"unknown task {task!r}")


def _benchmark_reordering(bundle: ModelBundle, docs: Sequence[Document]) -> dict:
    total_sentences = 0
    correct = 0
    taus: list[float] = []
    skipped = 0
    for doc in docs:
        if len(doc) < 2:
            skipped += 1
            continue
        seq = ppd_sequence(bundle.model, doc, bundle.store, bundle.vocab)
        ordering = reorder(seq)
        metrics = reorder_metrics(ordering, doc)
        total_sentences += len(doc)
        correct += sum(1 for slot, original in enumerate(ordering.permutation) if slot == original)
        taus.append(metrics.mean_tau)
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "task": "reordering",
        "acc": correct / total_sentences if total_sentences else 0.0,
        "tau": float(np.mean(taus)) if taus else 0.0,
        "n_docs": len(taus),
        "skipped_docs": skipped,
    }


def _benchmark_discrimination(
    bundle: ModelBundle,
    docs: Sequence[Document],
    k: int,
    seed: int,
    folds: int | None,
) -> dict:
    report: dict = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "task": "discrimination",
        "k": k,
    }
    if folds:
        rng = np.random.default_rng(seed)
        order = rng.permutation(len(docs))
        chunks = np.array_split(order, folds)
        per_fold = []
        total_correct = 0.0
        total_trials = 0
        skipped = 0
        for chunk in chunks:
            fold_docs = [docs[i] for i in chunk]
            metrics = discrimination_accuracy(bundle, fold_docs, k=k, seed=seed)
            per_fold.append(metrics.accuracy)
            total_correct += metrics.accuracy * metrics.trials
            total_trials += metrics.trials
            skipped += metrics.skipped_documents
        report.update(
            accuracy=total_correct / total_trials if total_trials else 0.0,
            trials=total_trials,
            skipped_docs=skipped,
            per_fold=per_fold,
        )
        return report
    metrics = discrimination_accuracy(bundle, docs, k=k, seed=seed)
    report.update(
        accuracy=metrics.accuracy,
        trials=metrics.trials,
        skipped_docs=metrics.skipped_documents,
    )
    return report


def _benchmark_summarization(bundle: ModelBundle, docs: Sequence[Document], summary_n: int) -> dict:
    """Scores the first-quantile heuristic against a Lead-n baseline.

    Reference summaries come from each document's ``reference`` metadata
    (newline-separated sentences); documents without one are skipped.
    """
    ppd_scores: dict[str, list[RougeScore]] = {"rouge1": [], "rouge2": [], "rougeL": []}
    lead_scores: dict[str, list[RougeScore]] = {"rouge1": [], "rouge2": [], "rougeL": []}
    skipped = 0
    scored = 0
    for doc in docs:
        reference_text = doc.source_meta.get("reference", "")
        reference_tokens = tokenize(reference_text.replace("\n", " "))
        if not reference_tokens:
            skipped += 1
            continue
        seq = ppd_sequence(bundle.model, doc, bundle.store, bundle.vocab)
        selection = summarize(seq, summary_n)
        ppd_tokens = _selection_tokens(doc, selection.selected)
        lead_tokens = _selection_tokens(doc, range(min(summary_n, len(doc))))
        for name, score in rouge_all(ppd_tokens, reference_tokens).items():
            ppd_scores[name].append(score)
        for name, score in rouge_all(lead_tokens, reference_tokens).items():
            lead_scores[name].append(score)
        scored += 1
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "task": "summarization",
        "n": summary_n,
        "n_docs": scored,
        "skipped_docs": skipped,
        "rows": [
            _summary_row("ppd", ppd_scores),
            _summary_row(f"lead-{summary_n}", lead_scores),
        ],
    }


def _selection_tokens(doc: Document, indices) -> list[str]:
    tokens: list[str] = []
    for i in indices:
        tokens.extend(doc.sentences[i].tokens)
    return tokens


def _summary_row(name: str, scores: dict[str, list[RougeScore]]) -> dict:
    def mean_f1(variant: str) -> float:
        values = [s.f1 for s in scores[variant]]
        return float(np.mean(values)) if values else 0.0

    return {
        "model": name,
        "r1": mean_f1("rouge1"),
        "r2": mean_f1("rouge2"),
        "rl": mean_f1("rougeL"),
    }


def format_report_table(report: dict) -> str:
    """Fixed-column human-readable rendering of a benchmark report."""
    task = report.get("task")
    if task == "reordering":
        lines = ["model            acc     tau", f"{'ppd':<14}{report['acc']:>8.3f}{report['tau']:>8.3f}"]
        return "\n".join(lines)
    if task == "discrimination":
        lines = [
            "model            acc  trials",
            f"{'ppd':<14}{report['accuracy']:>8.3f}{report['trials']:>8d}",
        ]
        if "per_fold" in report:
            folds = ", ".join(f"{a:.3f}" for a in report["per_fold"])
            lines.append(f"per-fold: {folds}")
        return "\n".join(lines)
    if task == "summarization":
        lines = ["model            R1      R2      RL"]
        for row in report["rows"]:
            lines.append(
                f"{row['model']:<14}{row['r1']:>8.3f}{row['r2']:>8.3f}{row['rl']:>8.3f}"
            )
        return "\n".join(lines)
    raise ValueError(f"cannot render report for task {task!r}")
