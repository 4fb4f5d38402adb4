"""Sentence-position workbench.

Trains a self-supervised sentence position model whose per-sentence output
is a probability distribution over document position quantiles, then uses
those distributions for reordering, coherence scoring, order
discrimination, heuristic extractive summarization, and writer-facing
structure insights.
"""

from .bundle import ModelBundle
from .corpus import (
    CorpusSplit,
    Document,
    LoadResult,
    PermutationSet,
    Sentence,
    Vocab,
    build_vocab,
    generate_permutations,
    load_corpus,
    make_document,
    quantile_label,
    segment_sentences,
    split_corpus,
    tokenize,
)
from .embeddings import (
    EncodedSentence,
    VectorStore,
    doc_average,
    encode_document,
    encode_sentence,
    encode_token,
    load_vectors,
)
from .position_model import (
    ModelConfig,
    PositionModel,
    TrainConfig,
    TrainHistory,
    cross_entropy_loss,
    forward,
    gradient_check,
    init_model,
    load_model,
    save_model,
    train,
)
from .scoring import (
    CoherenceScore,
    DiscriminationResult,
    Ordering,
    PPDSequence,
    coherence_score,
    discriminate,
    kendall_tau,
    ppd_sequence,
    reorder,
    weighted_quantile,
)
from .insights import (
    HeatmapData,
    IncoherenceBoundary,
    SubsectionSegmentation,
    SummarySelection,
    detect_subsections,
    export_heatmap,
    incoherence_points,
    jensen_shannon,
    summarize,
)
from .evaluation import (
    DiscriminationMetrics,
    ReorderMetrics,
    RougeScore,
    discrimination_accuracy,
    reorder_metrics,
    rouge_l,
    rouge_n,
    run_benchmark,
)
from .workbench import AnalysisOptions, AnalysisResult, analyze_document, analysis_payload

__version__ = "0.1.0"
