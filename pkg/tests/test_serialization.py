import json
import struct

import numpy as np
import pytest

from coherence import ModelConfig, forward, init_model, load_model, save_model
from coherence.embeddings import EncodedSentence
from coherence.errors import ChecksumMismatchError, VersionMismatchError
from coherence.position_model import peek_metadata
from coherence.position_model.serialization import FORMAT_VERSION, MAGIC


def random_model(seed):
    rng = np.random.default_rng(seed)
    widths = tuple(int(w) for w in rng.integers(2, 10, size=rng.integers(1, 3)))
    config = ModelConfig(
        q=int(rng.integers(2, 8)),
        layer_widths=widths,
        layer_dropouts=tuple(0.0 for _ in widths),
        input_dim=int(rng.integers(3, 12)),
        l_max=int(rng.integers(2, 6)),
        seed=seed,
    )
    return init_model(config)


def sentence_for(model, seed=0):
    rng = np.random.default_rng(seed)
    config = model.config
    data = rng.standard_normal((config.l_max, config.input_dim)).astype(np.float32)
    mask = np.ones(config.l_max, dtype=bool)
    return EncodedSentence(data, mask)


class TestRoundTrip:
    def test_parameters_bit_exact(self, tmp_path):
        model = random_model(1)
        path = tmp_path / "m.bin"
        save_model(model, path, vocab_hash="aa", vector_dim=3)
        loaded, config = load_model(path)
        assert config == model.config
        for a, b in zip(model.parameter_arrays(), loaded.parameter_arrays()):
            assert a.dtype == np.float32
            assert np.array_equal(a, b)

    def test_forward_bit_exact(self, tmp_path):
        model = random_model(2)
        path = tmp_path / "m.bin"
        save_model(model, path)
        loaded, _ = load_model(path)
        xs = sentence_for(model, seed=3)
        assert np.array_equal(forward(model, xs), forward(loaded, xs))

    def test_metadata(self, tmp_path):
        model = random_model(4)
        path = tmp_path / "m.bin"
        save_model(model, path, vocab_hash="deadbeef", vector_dim=300)
        meta = peek_metadata(path)
        assert meta["vocab_hash"] == "deadbeef"
        assert meta["vector_dim"] == 300
        assert meta["q"] == model.config.q


class TestCorruption:
    def test_flipped_payload_byte(self, tmp_path):
        model = random_model(5)
        path = tmp_path / "m.bin"
        save_model(model, path)
        raw = bytearray(path.read_bytes())
        raw[len(raw) // 2] ^= 0xFF
        path.write_bytes(bytes(raw))
        with pytest.raises(ChecksumMismatchError):
            load_model(path)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "m.bin"
        path.write_bytes(b"NOPE" + b"\x00" * 64)
        with pytest.raises(VersionMismatchError):
            load_model(path)

    def test_unknown_version(self, tmp_path):
        model = random_model(6)
        path = tmp_path / "m.bin"
        save_model(model, path)
        raw = bytearray(path.read_bytes())
        raw[4:8] = struct.pack("<I", FORMAT_VERSION + 1)
        # keep the checksum consistent so the version check itself fires
        import hashlib

        body = bytes(raw[:-32])
        raw[-32:] = hashlib.sha256(body).digest()
        path.write_bytes(bytes(raw))
        with pytest.raises(VersionMismatchError):
            load_model(path)

    def test_mismatched_declared_q(self, tmp_path):
        # rewrite the header to declare a different q; the payload no longer
        # matches the declared shapes
        model = random_model(7)
        path = tmp_path / "m.bin"
        save_model(model, path)
        raw = path.read_bytes()
        (header_len,) = struct.unpack("<I", raw[8:12])
        header = json.loads(raw[12 : 12 + header_len])
        header["q"] = header["q"] + 1
        new_header = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
        body = MAGIC + struct.pack("<I", FORMAT_VERSION) + struct.pack("<I", len(new_header))
        body += new_header + raw[12 + header_len : -32]
        import hashlib

        blob = body + hashlib.sha256(body).digest()
        path.write_bytes(blob)
        with pytest.raises(VersionMismatchError):
            load_model(path)

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "m.bin"
        path.write_bytes(b"PP")
        with pytest.raises(VersionMismatchError):
            load_model(path)


class TestManyModels:
    def test_twenty_random_round_trips(self, tmp_path):
        for seed in range(20):
            model = random_model(100 + seed)
            path = tmp_path / f"m{seed}.bin"
            save_model(model, path)
            loaded, _ = load_model(path)
            xs = sentence_for(model, seed=seed)
            assert np.array_equal(forward(model, xs), forward(loaded, xs))
