"""Pydantic request/response models for the HTTP API."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class AnalyzeOptionsPayload(BaseModel):
    n_summary: int = Field(default=3, ge=1)
    jsd_threshold: float = Field(default=0.2, ge=0.0)
    drop_delta: Optional[float] = Field(default=None, gt=0.0)


class AnalyzeRequest(BaseModel):
    model_id: str
    text: Optional[str] = None
    sentences: Optional[list[str]] = None
    options: AnalyzeOptionsPayload = AnalyzeOptionsPayload()


class CoherencePayload(BaseModel):
    tau: float
    n: int
    degenerate: bool


class OrderingPayload(BaseModel):
    permutation: list[int]
    weighted_quantiles: list[float]


class AnalyzeResponse(BaseModel):
    model_id: str
    sentences: list[str]
    ppd: list[list[float]]
    wq: list[float]
    boundaries: list[tuple[int, int, float]]
    segments: list[tuple[int, int]]
    summary: list[int]
    summary_scores: list[float]
    coherence: CoherencePayload
    ordering: OrderingPayload
    degenerate_sentences: list[int]


class SummarizeRequest(BaseModel):
    model_id: str
    text: Optional[str] = None
    sentences: Optional[list[str]] = None
    n: int = Field(default=3, ge=1)


class SummarizeResponse(BaseModel):
    model_id: str
    sentences: list[str]
    summary: list[int]
    summary_scores: list[float]


class ReorderRequest(BaseModel):
    model_id: str
    text: Optional[str] = None
    sentences: Optional[list[str]] = None


class ReorderResponse(BaseModel):
    model_id: str
    sentences: list[str]
    permutation: list[int]
    weighted_quantiles: list[float]
    reordered_sentences: list[str]


class ModelEntryPayload(BaseModel):
    model_id: str
    created_at: str
    config: dict
    vocab_hash: str
    corpus_tag: str


class ModelListResponse(BaseModel):
    models: list[ModelEntryPayload]


class TrainModelParams(BaseModel):
    q: int = Field(default=10, ge=2)
    layer_widths: list[int] = Field(default=[64, 64])
    layer_dropouts: list[float] = Field(default=[0.0, 0.0])
    l_max: int = Field(default=25, ge=1)
    seed: int = 0


class TrainRunParams(BaseModel):
    epochs: int = Field(default=5, ge=1)
    batch_size: int = Field(default=32, ge=1)
    learning_rate: float = 0.002
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-7
    shuffle_seed: int = 0


class TrainRequest(BaseModel):
    corpus_path: str
    corpus_format: str = "jsonl"
    vectors_path: str
    vocab_size: int = Field(default=1000, ge=1)
    val_fraction: float = Field(default=0.1, ge=0.0, lt=1.0)
    model: TrainModelParams = TrainModelParams()
    train: TrainRunParams = TrainRunParams()
    corpus_tag: str = ""
    submission_token: Optional[str] = None


class JobProgress(BaseModel):
    epoch: int
    total_epochs: int


class JobPayload(BaseModel):
    job_id: str
    status: str
    progress: JobProgress
    model_id: Optional[str] = None
    error: Optional[str] = None
