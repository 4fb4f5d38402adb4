"""Shared fixtures. BLAS threading is pinned to one core before numpy loads
so timed checks measure single-core behaviour."""

import os

for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import numpy as np
import pytest

from coherence import ModelConfig, init_model
from coherence.bundle import ModelBundle
from coherence.embeddings import EncodedSentence
from coherence.synthetic import generate_synthetic_corpus, synthetic_vector_store


@pytest.fixture(scope="session")
def tiny_config():
    return ModelConfig(
        q=3, layer_widths=(8, 8), layer_dropouts=(0.0, 0.0), input_dim=15, l_max=5, seed=11
    )


@pytest.fixture(scope="session")
def tiny_model(tiny_config):
    return init_model(tiny_config)


@pytest.fixture()
def random_sentence():
    def make(l_max=5, input_dim=15, n_real=None, seed=0):
        rng = np.random.default_rng(seed)
        n_real = l_max if n_real is None else n_real
        data = np.zeros((l_max, input_dim), dtype=np.float32)
        data[:n_real] = rng.standard_normal((n_real, input_dim)).astype(np.float32)
        mask = np.zeros(l_max, dtype=bool)
        mask[:n_real] = True
        return EncodedSentence(data=data, mask=mask)

    return make


@pytest.fixture(scope="session")
def synth_bundle():
    """Small random-initialized bundle over the synthetic token space."""
    store = synthetic_vector_store(dim=6, seed=3)
    config = ModelConfig(
        q=5, layer_widths=(12, 12), layer_dropouts=(0.0, 0.0),
        input_dim=3 * store.dim, l_max=8, seed=21,
    )
    model = init_model(config)
    return ModelBundle(model=model, store=store, vocab=None)


@pytest.fixture(scope="session")
def synth_docs():
    return generate_synthetic_corpus(30, n_sentences=8, seed=5)
