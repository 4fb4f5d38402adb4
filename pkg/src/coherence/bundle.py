"""A trained model together with everything needed to encode new text."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Vocab
from .embeddings import VectorStore
from .position_model import PositionModel


@dataclass(frozen=True)
class ModelBundle:
    model: PositionModel
    store: VectorStore
    vocab: Vocab | None

    @property
    def q(self) -> int:
        return self.model.config.q
