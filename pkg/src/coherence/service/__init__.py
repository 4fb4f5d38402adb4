"""HTTP service: model registry, analysis API, training job queue."""

from .app import create_app
from .jobs import DuplicateSubmissionError, JobQueue, TrainJob, UnknownJobError
from .registry import ModelRegistry, RegistryEntry, UnknownModelError, load_vocab, save_vocab

__all__ = [
    "DuplicateSubmissionError",
    "JobQueue",
    "ModelRegistry",
    "RegistryEntry",
    "TrainJob",
    "UnknownJobError",
    "UnknownModelError",
    "create_app",
    "load_vocab",
    "save_vocab",
]
