"""FIFO training job queue; one job runs at a time."""

from __future__ import annotations

import queue
import threading
import uuid
from dataclasses import dataclass, field
from typing import Callable

from ..errors import CoherenceError


class DuplicateSubmissionError(CoherenceError):
    """A job with the same submission token was already accepted."""


class UnknownJobError(CoherenceError):
    """job_id does not exist."""


@dataclass
class TrainJob:
    job_id: str
    status: str = "queued"  # queued -> running -> done | failed
    epoch: int = 0
    total_epochs: int = 0
    model_id: str | None = None
    error: str | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "job_id": self.job_id,
                "status": self.status,
                "epoch": self.epoch,
                "total_epochs": self.total_epochs,
                "model_id": self.model_id,
                "error": self.error,
            }


JobRunner = Callable[[TrainJob], str]


class JobQueue:
    """Single-worker queue; jobs execute in submission order."""

    def __init__(self) -> None:
        self._queue: "queue.Queue[tuple[TrainJob, JobRunner]]" = queue.Queue()
        self._jobs: dict[str, TrainJob] = {}
        self._tokens: dict[str, str] = {}
        self._lock = threading.Lock()
        self._worker: threading.Thread | None = None
        self._stopping = threading.Event()

    def _ensure_worker(self) -> None:
        if self._worker is None or not self._worker.is_alive():
            self._worker = threading.Thread(target=self._run, daemon=True, name="train-worker")
            self._worker.start()

    def submit(self, runner: JobRunner, total_epochs: int, token: str | None = None) -> TrainJob:
        with self._lock:
            if token is not None:
                if token in self._tokens:
                    raise DuplicateSubmissionError(f"submission token {token!r} already used")
            job = TrainJob(job_id=uuid.uuid4().hex[:12], total_epochs=total_epochs)
            self._jobs[job.job_id] = job
            if token is not None:
                self._tokens[token] = job.job_id
        self._queue.put((job, runner))
        self._ensure_worker()
        return job

    def get(self, job_id: str) -> TrainJob:
        with self._lock:
            if job_id not in self._jobs:
                raise UnknownJobError(f"unknown job {job_id!r}")
            return self._jobs[job_id]

    def _run(self) -> None:
        while not self._stopping.is_set():
            try:
                job, runner = self._queue.get(timeout=0.2)
            except queue.Empty:
                continue
            with job._lock:
                job.status = "running"
            try:
                model_id = runner(job)
            except Exception as exc:  # job failures must not kill the worker
                with job._lock:
                    job.status = "failed"
                    job.error = f"{type(exc).__name__}: {exc}"
            else:
                with job._lock:
                    job.status = "done"
                    job.model_id = model_id
            finally:
                self._queue.task_done()

    def shutdown(self) -> None:
        self._stopping.set()

    def wait_idle(self, timeout: float | None = None) -> None:
        """Block until all queued jobs have finished (test helper)."""
        import time

        deadline = None if timeout is None else time.monotonic() + timeout
        while True:
            with self._lock:
                pending = [
                    j for j in self._jobs.values() if j.status in ("queued", "running")
                ]
            if not pending:
                return
            if deadline is not None and time.monotonic() > deadline:
                raise TimeoutError("jobs still pending")
            time.sleep(0.02)
