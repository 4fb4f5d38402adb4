import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from coherence import ModelConfig, build_vocab, init_model
from coherence.corpus import save_jsonl
from coherence.embeddings import save_vectors
from coherence.service import create_app
from coherence.synthetic import generate_synthetic_corpus, synthetic_vector_store


@pytest.fixture(scope="module")
def service_env(tmp_path_factory):
    """Data dir with one registered random-init model plus corpus/vectors files."""
    root = tmp_path_factory.mktemp("svc")
    data_dir = root / "data"
    store = synthetic_vector_store(dim=6, seed=1)
    vectors_path = root / "vectors.txt"
    save_vectors(store, vectors_path)
    docs = generate_synthetic_corpus(40, n_sentences=6, seed=2)
    corpus_path = root / "corpus.jsonl"
    save_jsonl(docs, corpus_path)
    config = ModelConfig(
        q=4, layer_widths=(8, 8), layer_dropouts=(0.0, 0.0), input_dim=18, l_max=8, seed=3
    )
    model = init_model(config)
    vocab = build_vocab(docs, 100)
    app = create_app(data_dir=data_dir)
    registry = app.state.registry
    entry = registry.register(model, vocab, vectors_path, corpus_tag="synthetic")
    client = TestClient(app)
    return {
        "client": client,
        "app": app,
        "model_id": entry.model_id,
        "vectors_path": vectors_path,
        "corpus_path": corpus_path,
        "data_dir": data_dir,
    }


class TestAnalyze:
    def test_arrays_aligned_to_sentence_count(self, service_env):
        response = service_env["client"].post(
            "/api/analyze",
            json={
                "model_id": service_env["model_id"],
                "sentences": ["band0 band1", "band4 band5", "band8 band9"],
            },
        )
        assert response.status_code == 200
        body = response.json()
        assert len(body["sentences"]) == 3
        assert len(body["ppd"]) == 3
        assert len(body["wq"]) == 3
        assert len(body["ordering"]["permutation"]) == 3
        assert body["coherence"]["n"] == 3
        assert all(len(row) == 4 for row in body["ppd"])

    def test_raw_text_goes_through_segmenter(self, service_env):
        response = service_env["client"].post(
            "/api/analyze",
            json={
                "model_id": service_env["model_id"],
                "text": "Band0 is here. Band9 is there.",
            },
        )
        assert response.status_code == 200
        assert len(response.json()["sentences"]) == 2

    def test_presegmented_bypasses_segmenter(self, service_env):
        # a terminator mid-sentence must not split when sentences are given
        response = service_env["client"].post(
            "/api/analyze",
            json={
                "model_id": service_env["model_id"],
                "sentences": ["band0. Band1 band2.", "band3."],
            },
        )
        assert response.status_code == 200
        assert len(response.json()["sentences"]) == 2

    def test_unknown_model_404(self, service_env):
        response = service_env["client"].post(
            "/api/analyze", json={"model_id": "missing", "sentences": ["band0"]}
        )
        assert response.status_code == 404
        assert response.json()["error"] == "unknown_model"

    def test_empty_text_422(self, service_env):
        response = service_env["client"].post(
            "/api/analyze", json={"model_id": service_env["model_id"], "text": "   "}
        )
        assert response.status_code == 422

    def test_deterministic_responses(self, service_env):
        request = {
            "model_id": service_env["model_id"],
            "sentences": ["band0 band1", "band7 band8"],
        }
        a = service_env["client"].post("/api/analyze", json=request).json()
        b = service_env["client"].post("/api/analyze", json=request).json()
        assert a == b

    def test_options_respected(self, service_env):
        request = {
            "model_id": service_env["model_id"],
            "sentences": ["band0 band1", "band4", "band8 band9"],
            "options": {"n_summary": 1, "jsd_threshold": 0.0},
        }
        body = service_env["client"].post("/api/analyze", json=request).json()
        assert len(body["summary"]) == 1


class TestSummarizeReorder:
    def test_summarize_endpoint(self, service_env):
        response = service_env["client"].post(
            "/api/summarize",
            json={
                "model_id": service_env["model_id"],
                "sentences": ["band0 band0", "band5 band5", "band9 band9"],
                "n": 2,
            },
        )
        assert response.status_code == 200
        body = response.json()
        assert len(body["summary"]) == 2
        assert body["summary_scores"] == sorted(body["summary_scores"], reverse=True)

    def test_reorder_endpoint(self, service_env):
        sentences = ["band0 band0", "band5 band5", "band9 band9"]
        response = service_env["client"].post(
            "/api/reorder",
            json={"model_id": service_env["model_id"], "sentences": sentences},
        )
        assert response.status_code == 200
        body = response.json()
        assert sorted(body["permutation"]) == [0, 1, 2]
        assert body["reordered_sentences"] == [sentences[i] for i in body["permutation"]]


class TestModelsEndpoint:
    def test_list_models(self, service_env):
        response = service_env["client"].get("/api/models")
        assert response.status_code == 200
        models = response.json()["models"]
        assert any(m["model_id"] == service_env["model_id"] for m in models)
        entry = next(m for m in models if m["model_id"] == service_env["model_id"])
        assert entry["corpus_tag"] == "synthetic"
        assert entry["config"]["q"] == 4

    def test_registry_survives_restart(self, service_env):
        app2 = create_app(data_dir=service_env["data_dir"])
        with TestClient(app2) as client2:
            models = client2.get("/api/models").json()["models"]
            assert any(m["model_id"] == service_env["model_id"] for m in models)
            # and the reloaded model still answers
            response = client2.post(
                "/api/analyze",
                json={"model_id": service_env["model_id"], "sentences": ["band0 band1"]},
            )
            assert response.status_code == 200

    def test_tampered_model_file_detected(self, service_env):
        model_dir = service_env["data_dir"] / "models" / service_env["model_id"]
        model_path = model_dir / "model.bin"
        original = model_path.read_bytes()
        try:
            corrupted = bytearray(original)
            corrupted[len(corrupted) // 2] ^= 0xFF
            model_path.write_bytes(bytes(corrupted))
            # a fresh process has no cached copy and must hit the bad file
            app2 = create_app(data_dir=service_env["data_dir"])
            with TestClient(app2, raise_server_exceptions=False) as client2:
                response = client2.post(
                    "/api/analyze",
                    json={"model_id": service_env["model_id"], "sentences": ["band0"]},
                )
                assert response.status_code == 500
                assert "diagnostic_id" in response.json()
        finally:
            model_path.write_bytes(original)


class TestTrainJobs:
    def _submit(self, service_env, token=None, epochs=1):
        payload = {
            "corpus_path": str(service_env["corpus_path"]),
            "vectors_path": str(service_env["vectors_path"]),
            "vocab_size": 100,
            "val_fraction": 0.2,
            "model": {
                "q": 3,
                "layer_widths": [4, 4],
                "layer_dropouts": [0.0, 0.0],
                "l_max": 8,
                "seed": 5,
            },
            "train": {"epochs": epochs, "batch_size": 16},
            "corpus_tag": "job-test",
        }
        if token is not None:
            payload["submission_token"] = token
        return service_env["client"].post("/api/train", json=payload)

    def _wait(self, service_env, job_id, timeout=120.0):
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            body = service_env["client"].get(f"/api/jobs/{job_id}").json()
            if body["status"] in ("done", "failed"):
                return body
            time.sleep(0.05)
        raise TimeoutError("job did not finish")

    def test_job_lifecycle(self, service_env):
        response = self._submit(service_env)
        assert response.status_code == 202
        job = response.json()
        assert job["status"] in ("queued", "running")
        finished = self._wait(service_env, job["job_id"])
        assert finished["status"] == "done"
        assert finished["model_id"]
        assert finished["progress"]["epoch"] == finished["progress"]["total_epochs"]
        models = service_env["client"].get("/api/models").json()["models"]
        assert any(m["model_id"] == finished["model_id"] for m in models)

    def test_fifo_order(self, service_env):
        first = self._submit(service_env).json()
        second = self._submit(service_env).json()
        done_first = self._wait(service_env, first["job_id"])
        done_second = self._wait(service_env, second["job_id"])
        assert done_first["status"] == "done"
        assert done_second["status"] == "done"

    def test_duplicate_token_409(self, service_env):
        token = "tok-1"
        first = self._submit(service_env, token=token)
        assert first.status_code == 202
        second = self._submit(service_env, token=token)
        assert second.status_code == 409
        self._wait(service_env, first.json()["job_id"])

    def test_unknown_job_404(self, service_env):
        response = service_env["client"].get("/api/jobs/nope")
        assert response.status_code == 404

    def test_missing_corpus_422(self, service_env):
        payload = {
            "corpus_path": "/nonexistent/corpus.jsonl",
            "vectors_path": str(service_env["vectors_path"]),
        }
        response = service_env["client"].post("/api/train", json=payload)
        assert response.status_code == 422

    def test_failed_job_reports_error(self, service_env, tmp_path):
        # corpus whose documents all tokenize empty -> pipeline raises
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id": "a", "sentences": []}\n')
        payload = {
            "corpus_path": str(bad),
            "vectors_path": str(service_env["vectors_path"]),
            "train": {"epochs": 1},
        }
        response = service_env["client"].post("/api/train", json=payload)
        assert response.status_code == 202
        finished = self._wait(service_env, response.json()["job_id"])
        assert finished["status"] == "failed"
        assert finished["error"]
