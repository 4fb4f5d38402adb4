"""Record a real /api/analyze response as the webapp test fixture.

Trains a small model on the synthetic corpus, registers it, and captures
the response for a two-part document (bands rise twice, so the analysis
shows a boundary and two subsections). Rerun after changing the response
schema: python scripts/record_webapp_fixture.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from coherence import ModelConfig, TrainConfig, init_model, train
from coherence.corpus import build_vocab
from coherence.dataset import build_position_dataset
from coherence.embeddings import save_vectors
from coherence.service import create_app
from coherence.synthetic import generate_synthetic_corpus, synthetic_vector_store

FIXTURE_PATH = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"

REQUEST_SENTENCES = [
    "band0 band1 band0 filler3",
    "band2 band3 band2",
    "band5 band6 filler7 band6",
    "band8 band9 band9",
    "band0 band0 band1 filler1",
    "band4 band5 band4",
    "band9 band8 band9 filler2",
]


def main() -> None:
    store = synthetic_vector_store(dim=8, seed=51)
    docs = generate_synthetic_corpus(300, n_sentences=8, seed=52)
    vocab = build_vocab(docs, 100)
    q, l_max = 5, 8
    config = ModelConfig(
        q=q, layer_widths=(24, 24), layer_dropouts=(0.0, 0.0),
        input_dim=3 * store.dim, l_max=l_max, seed=53,
    )
    model = init_model(config)
    dataset = build_position_dataset(docs, store, vocab, q, l_max)
    model, _ = train(model, dataset, TrainConfig(epochs=3, batch_size=32, shuffle_seed=54))

    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        vectors_path = tmp_path / "vectors.txt"
        save_vectors(store, vectors_path)
        app = create_app(data_dir=tmp_path / "data")
        entry = app.state.registry.register(
            model, vocab, vectors_path, corpus_tag="synthetic-demo", model_id="fixture-model"
        )
        client = TestClient(app)
        response = client.post(
            "/api/analyze",
            json={
                "model_id": entry.model_id,
                "sentences": REQUEST_SENTENCES,
                "options": {"n_summary": 3, "jsd_threshold": 0.2, "drop_delta": None},
            },
        )
        response.raise_for_status()
        body = response.json()

    FIXTURE_PATH.mkdir(parents=True, exist_ok=True)
    out = FIXTURE_PATH / "analyze_response.json"
    out.write_text(json.dumps(body, indent=2), encoding="utf-8")
    print(f"wrote {out}")
    print(f"segments: {body['segments']}, boundaries: {[b[:2] for b in body['boundaries']]}")
    print(f"summary: {body['summary']}")


if __name__ == "__main__":
    main()
