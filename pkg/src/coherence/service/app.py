"""HTTP analysis API and webapp host.

Analysis endpoints are stateless and synchronous (documents are small);
training runs asynchronously through a single-worker FIFO job queue.
Configuration comes from ``COHERE_DATA_DIR``, ``COHERE_PORT``, and
``COHERE_WEBAPP_DIR``.
"""

from __future__ import annotations

import logging
import os
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..corpus import Document, Sentence, segment_sentences, tokenize
from ..errors import (
    ChecksumMismatchError,
    CoherenceError,
    EmptyDocumentError,
    VersionMismatchError,
)
from ..pipeline import train_from_corpus
from ..position_model import TrainConfig
from ..workbench import AnalysisOptions, analysis_payload, analyze_document
from .jobs import DuplicateSubmissionError, JobQueue, TrainJob, UnknownJobError
from .registry import ModelRegistry, UnknownModelError
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    JobPayload,
    JobProgress,
    ModelEntryPayload,
    ModelListResponse,
    ReorderRequest,
    ReorderResponse,
    SummarizeRequest,
    SummarizeResponse,
    TrainRequest,
)

logger = logging.getLogger("coherence.service")

DEFAULT_DATA_DIR = "cohere-data"
DEFAULT_PORT = 8000


def _request_document(model_id: str, text: str | None, sentences: list[str] | None) -> Document:
    """Build the document to analyze; degenerate sentences are kept so the
    response stays aligned with the caller's input."""
    if sentences is not None:
        if not sentences:
            raise HTTPException(status_code=422, detail="empty sentence list")
        built = tuple(
            Sentence(index=i, text=t, tokens=tuple(tokenize(t))) for i, t in enumerate(sentences)
        )
        if all(not s.tokens for s in built):
            raise HTTPException(status_code=422, detail="no tokenizable sentences")
        return Document(id=f"request-{model_id}", sentences=built, source_meta={})
    if text is None or not text.strip():
        raise HTTPException(status_code=422, detail="provide 'text' or 'sentences'")
    try:
        segmented = segment_sentences(text)
    except EmptyDocumentError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return Document(id=f"request-{model_id}", sentences=tuple(segmented), source_meta={})


def create_app(
    data_dir: str | Path | None = None,
    webapp_dir: str | Path | None = None,
) -> FastAPI:
    data_dir = Path(data_dir or os.environ.get("COHERE_DATA_DIR", DEFAULT_DATA_DIR))
    data_dir.mkdir(parents=True, exist_ok=True)
    registry = ModelRegistry(data_dir)
    jobs = JobQueue()
    app = FastAPI(title="coherence workbench", version="0.1.0")
    app.state.registry = registry
    app.state.jobs = jobs
    app.state.data_dir = data_dir

    @app.exception_handler(UnknownModelError)
    async def _unknown_model(_req: Request, exc: UnknownModelError):
        return JSONResponse(status_code=404, content={"error": "unknown_model", "detail": str(exc)})

    @app.exception_handler(ChecksumMismatchError)
    @app.exception_handler(VersionMismatchError)
    async def _broken_model(_req: Request, exc: CoherenceError):
        # a registered model that no longer loads is a server-side fault
        diagnostic_id = uuid.uuid4().hex[:12]
        logger.error("model failed to load (%s): %s", diagnostic_id, exc)
        return JSONResponse(
            status_code=500,
            content={"error": "internal", "diagnostic_id": diagnostic_id, "detail": str(exc)},
        )

    @app.exception_handler(CoherenceError)
    async def _domain_error(_req: Request, exc: CoherenceError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(Exception)
    async def _internal_error(_req: Request, exc: Exception):
        diagnostic_id = uuid.uuid4().hex[:12]
        logger.exception("unhandled error %s", diagnostic_id)
        return JSONResponse(
            status_code=500,
            content={"error": "internal", "diagnostic_id": diagnostic_id},
        )

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "models": len(registry.list_entries())}

    @app.get("/api/models", response_model=ModelListResponse)
    def list_models() -> ModelListResponse:
        return ModelListResponse(
            models=[
                ModelEntryPayload(
                    model_id=e.model_id,
                    created_at=e.created_at,
                    config=e.config,
                    vocab_hash=e.vocab_hash,
                    corpus_tag=e.corpus_tag,
                )
                for e in registry.list_entries()
            ]
        )

    @app.post("/api/analyze", response_model=AnalyzeResponse)
    def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        bundle = registry.load_bundle(req.model_id)
        doc = _request_document(req.model_id, req.text, req.sentences)
        options = AnalysisOptions(
            n_summary=req.options.n_summary,
            jsd_threshold=req.options.jsd_threshold,
            drop_delta=req.options.drop_delta,
        )
        result = analyze_document(bundle, doc, options)
        payload = analysis_payload(result)
        return AnalyzeResponse(model_id=req.model_id, **payload)

    @app.post("/api/summarize", response_model=SummarizeResponse)
    def summarize_endpoint(req: SummarizeRequest) -> SummarizeResponse:
        bundle = registry.load_bundle(req.model_id)
        doc = _request_document(req.model_id, req.text, req.sentences)
        result = analyze_document(bundle, doc, AnalysisOptions(n_summary=req.n))
        return SummarizeResponse(
            model_id=req.model_id,
            sentences=[s.text for s in doc.sentences],
            summary=list(result.summary.selected),
            summary_scores=list(result.summary.scores),
        )

    @app.post("/api/reorder", response_model=ReorderResponse)
    def reorder_endpoint(req: ReorderRequest) -> ReorderResponse:
        bundle = registry.load_bundle(req.model_id)
        doc = _request_document(req.model_id, req.text, req.sentences)
        result = analyze_document(bundle, doc)
        permutation = list(result.ordering.permutation)
        return ReorderResponse(
            model_id=req.model_id,
            sentences=[s.text for s in doc.sentences],
            permutation=permutation,
            weighted_quantiles=list(result.ordering.weighted_quantiles),
            reordered_sentences=[doc.sentences[i].text for i in permutation],
        )

    @app.post("/api/train", response_model=JobPayload, status_code=202)
    def submit_training(req: TrainRequest) -> JobPayload:
        corpus_path = Path(req.corpus_path)
        if not corpus_path.exists():
            raise HTTPException(status_code=422, detail=f"corpus not found: {corpus_path}")
        vectors_path = Path(req.vectors_path)
        if not vectors_path.exists():
            raise HTTPException(status_code=422, detail=f"vectors not found: {vectors_path}")

        def runner(job: TrainJob) -> str:
            def on_epoch(epoch: int, _stats) -> None:
                with job._lock:
                    job.epoch = epoch + 1

            artifacts = train_from_corpus(
                corpus_path,
                req.corpus_format,
                vectors_path,
                q=req.model.q,
                layer_widths=tuple(req.model.layer_widths),
                layer_dropouts=tuple(req.model.layer_dropouts),
                l_max=req.model.l_max,
                seed=req.model.seed,
                vocab_size=req.vocab_size,
                val_fraction=req.val_fraction,
                tc=TrainConfig(
                    epochs=req.train.epochs,
                    batch_size=req.train.batch_size,
                    learning_rate=req.train.learning_rate,
                    beta1=req.train.beta1,
                    beta2=req.train.beta2,
                    epsilon=req.train.epsilon,
                    shuffle_seed=req.train.shuffle_seed,
                ),
                on_epoch=on_epoch,
            )
            entry = registry.register(
                artifacts.bundle.model,
                artifacts.bundle.vocab,
                vectors_path,
                corpus_tag=req.corpus_tag,
                vector_dim=artifacts.bundle.store.dim,
            )
            return entry.model_id

        try:
            job = jobs.submit(runner, total_epochs=req.train.epochs, token=req.submission_token)
        except DuplicateSubmissionError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return _job_payload(job)

    @app.get("/api/jobs/{job_id}", response_model=JobPayload)
    def job_status(job_id: str) -> JobPayload:
        try:
            job = jobs.get(job_id)
        except UnknownJobError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return _job_payload(job)

    webapp_dir = webapp_dir or os.environ.get("COHERE_WEBAPP_DIR")
    if webapp_dir and Path(webapp_dir).is_dir():
        app.mount("/", StaticFiles(directory=webapp_dir, html=True), name="webapp")

    return app


def _job_payload(job: TrainJob) -> JobPayload:
    snap = job.snapshot()
    return JobPayload(
        job_id=snap["job_id"],
        status=snap["status"],
        progress=JobProgress(epoch=snap["epoch"], total_epochs=snap["total_epochs"]),
        model_id=snap["model_id"],
        error=snap["error"],
    )


def main() -> None:
    """Entry point used by ``cohere serve``."""
    import uvicorn

    port = int(os.environ.get("COHERE_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(), host="127.0.0.1", port=port)
