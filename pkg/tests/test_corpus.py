import json
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coherence import (
    build_vocab,
    generate_permutations,
    load_corpus,
    make_document,
    quantile_label,
    segment_sentences,
    split_corpus,
    tokenize,
)
from coherence.corpus import DEFAULT_ABBREVIATIONS, save_jsonl
from coherence.errors import (
    DegenerateDocumentError,
    EmptyDocumentError,
    FormatError,
    InvalidIndexError,
)


class TestTokenize:
    def test_basic(self):
        assert tokenize("The cat sat.") == ["the", "cat", "sat", "."]

    def test_empty(self):
        assert tokenize("") == []

    def test_dotted_abbreviation_keeps_final_period(self):
        # detach-trailing-punctuation rule, hand-applied
        assert tokenize("U.S. GDP, 2015") == ["u.s.", "gdp", ",", "2015"]

    def test_digits_kept(self):
        assert tokenize("in 1997, 42 things") == ["in", "1997", ",", "42", "things"]

    def test_leading_punctuation_detached(self):
        assert tokenize('"Hello," she said!') == ['"', "hello", ",", '"', "she", "said", "!"]

    def test_pure_punctuation_chunk(self):
        assert tokenize("a - b") == ["a", "-", "b"]


class TestSegmentSentences:
    def test_two_terminal_periods(self):
        texts = [s.text for s in segment_sentences("A b. C d.")]
        assert texts == ["A b.", "C d."]

    def test_no_terminator_still_one_sentence(self):
        sentences = segment_sentences("One sentence")
        assert len(sentences) == 1
        assert sentences[0].text == "One sentence"

    def test_abbreviation_stoplist(self):
        assert "dr." in DEFAULT_ABBREVIATIONS
        texts = [s.text for s in segment_sentences("Dr. Smith ran. He won.")]
        assert texts == ["Dr. Smith ran.", "He won."]

    def test_question_and_exclamation(self):
        texts = [s.text for s in segment_sentences("Really? Yes! Fine.")]
        assert texts == ["Really?", "Yes!", "Fine."]

    def test_lowercase_after_period_does_not_split(self):
        texts = [s.text for s in segment_sentences("pi is 3.14 approx. still one thought")]
        assert len(texts) == 1

    def test_empty_raises(self):
        with pytest.raises(EmptyDocumentError):
            segment_sentences("   ")

    def test_indices_contiguous(self):
        sentences = segment_sentences("A b. C d. E f.")
        assert [s.index for s in sentences] == [0, 1, 2]


class TestBuildVocab:
    def _docs(self, counts):
        words = [w for w, c in counts.items() for _ in range(c)]
        return [make_document("d0", [" ".join(words)])]

    def test_caps_by_frequency(self):
        vocab = build_vocab(self._docs({"a": 3, "b": 2, "c": 1}), max_size=2)
        assert set(vocab.ranks) == {"a", "b"}
        assert vocab.rank("a") == 0

    def test_max_size_larger_than_distinct(self):
        vocab = build_vocab(self._docs({"a": 1, "b": 1}), max_size=10)
        assert len(vocab) == 2

    def test_lexicographic_tiebreak(self):
        vocab = build_vocab(self._docs({"b": 2, "a": 2}), max_size=1)
        assert set(vocab.ranks) == {"a"}

    def test_document_order_invariant(self):
        doc1 = make_document("a", ["x y", "z z"])
        doc2 = make_document("b", ["z w", "y y"])
        v1 = build_vocab([doc1, doc2], 3)
        v2 = build_vocab([doc2, doc1], 3)
        assert v1.ranks == v2.ranks

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            build_vocab([], 5)


class TestQuantileLabel:
    def test_first_sentence_first_quantile(self):
        assert quantile_label(0, 10, 5) == 0

    def test_last_sentence_last_quantile(self):
        assert quantile_label(9, 10, 5) == 4

    def test_balanced_when_divisible(self):
        labels = [quantile_label(i, 10, 5) for i in range(10)]
        assert labels[5] == 2
        assert Counter(labels) == {k: 2 for k in range(5)}

    def test_monotone_in_index(self):
        for n, q in [(7, 3), (4, 15), (30, 10)]:
            labels = [quantile_label(i, n, q) for i in range(n)]
            assert labels == sorted(labels)
            assert all(0 <= l < q for l in labels)

    @given(st.integers(1, 60), st.integers(2, 20))
    @settings(max_examples=80)
    def test_balanced_whenever_q_divides_n(self, n, q):
        if n % q:
            return
        counts = Counter(quantile_label(i, n, q) for i in range(n))
        assert counts == {k: n // q for k in range(q)}

    def test_invalid_index(self):
        with pytest.raises(InvalidIndexError):
            quantile_label(10, 10, 5)
        with pytest.raises(InvalidIndexError):
            quantile_label(-1, 10, 5)
        with pytest.raises(InvalidIndexError):
            quantile_label(0, 5, 1)


class TestGeneratePermutations:
    def test_two_sentences_always_the_swap(self):
        doc = make_document("d", ["a a", "b b"])
        perms = generate_permutations(doc, k=20, seed=0)
        assert len(perms.permutations) == 20
        assert all(p == (1, 0) for p in perms.permutations)

    def test_deterministic(self):
        doc = make_document("d", ["a", "b", "c", "d"])
        assert generate_permutations(doc, 10, seed=3) == generate_permutations(doc, 10, seed=3)

    def test_never_identity(self):
        doc = make_document("d", ["a", "b", "c"])
        perms = generate_permutations(doc, 100, seed=1)
        assert all(p != (0, 1, 2) for p in perms.permutations)

    def test_distinct_when_pool_allows(self):
        doc = make_document("d", ["a", "b", "c", "d"])  # 23 non-identity orders
        perms = generate_permutations(doc, 23, seed=5)
        assert len(set(perms.permutations)) == 23

    def test_uniform_when_duplicates_allowed(self):
        # 5 non-identity permutations of 3 items; 1000 draws, expect ~200 each
        doc = make_document("d", ["a", "b", "c"])
        perms = generate_permutations(doc, 1000, seed=9)
        counts = Counter(perms.permutations)
        assert set(counts) == {p for p in counts}
        assert len(counts) == 5
        sigma = math.sqrt(1000 * (1 / 5) * (4 / 5))
        for count in counts.values():
            assert abs(count - 200) <= 3 * sigma

    def test_inverse_composition_is_identity(self):
        doc = make_document("d", ["a", "b", "c", "d", "e"])
        perms = generate_permutations(doc, 50, seed=2)
        for p in perms.permutations:
            inverse = [0] * len(p)
            for slot, original in enumerate(p):
                inverse[original] = slot
            assert [p[inverse[i]] for i in range(len(p))] == list(range(len(p)))

    def test_single_sentence_rejected(self):
        with pytest.raises(DegenerateDocumentError):
            generate_permutations(make_document("d", ["a"]), 5, seed=0)


class TestSplitCorpus:
    def test_partition(self):
        ids = [f"d{i}" for i in range(100)]
        split = split_corpus(ids, 0.1, 0.2, seed=4)
        pieces = [set(split.train), set(split.validation), set(split.test)]
        assert set().union(*pieces) == set(ids)
        assert sum(len(p) for p in pieces) == 100
        assert len(split.validation) == 10
        assert len(split.test) == 20


class TestLoadCorpus:
    def test_jsonl_roundtrip(self, tmp_path):
        path = tmp_path / "c.jsonl"
        records = [
            {"id": "a", "sentences": ["One two.", "Three four."], "meta": {"k": "v"}},
            {"id": "b", "sentences": ["Five."], "meta": {}},
            {"id": "c", "sentences": ["Six seven eight."]},
        ]
        path.write_text("\n".join(json.dumps(r) for r in records))
        result = load_corpus(path, "jsonl")
        assert len(result.documents) == 3
        assert result.documents[0].source_meta["k"] == "v"
        assert result.documents[0].sentences[1].tokens == ("three", "four", ".")
        assert not result.skipped

    def test_jsonl_empty_sentences_skipped_with_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            json.dumps({"id": "a", "sentences": ["Ok."]})
            + "\n"
            + json.dumps({"id": "b", "sentences": []})
            + "\n"
        )
        result = load_corpus(path, "jsonl")
        assert len(result.documents) == 1
        assert len(result.skipped) == 1
        assert result.skipped[0].location.endswith(":2")

    def test_jsonl_malformed_line_reported(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "sentences": ["Ok."]}\nnot json\n')
        result = load_corpus(path, "jsonl")
        assert len(result.documents) == 1
        assert len(result.skipped) == 1
        assert ":2" in result.skipped[0].location

    def test_one_sentence_per_line_blocks(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("First sentence.\nSecond one.\n\nOther doc here.\nAnd more.\n")
        result = load_corpus(path, "one_sentence_per_line")
        assert len(result.documents) == 2
        assert len(result.documents[0]) == 2
        assert result.documents[1].id == "c-1"

    def test_raw_text_dir(self, tmp_path):
        (tmp_path / "x.txt").write_text("A b. C d.")
        (tmp_path / "y.txt").write_text("Hello there.")
        result = load_corpus(tmp_path, "raw_text_dir")
        assert [d.id for d in result.documents] == ["x", "y"]
        assert len(result.documents[0]) == 2

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            load_corpus(tmp_path, "parquet")

    def test_jsonl_on_directory_raises(self, tmp_path):
        with pytest.raises(FormatError):
            load_corpus(tmp_path, "jsonl")

    def test_save_jsonl_roundtrip(self, tmp_path):
        docs = [make_document("a", ["One two.", "Three."], {"m": "1"})]
        out = tmp_path / "out.jsonl"
        save_jsonl(docs, out)
        back = load_corpus(out, "jsonl")
        assert back.documents[0].id == "a"
        assert [s.text for s in back.documents[0].sentences] == ["One two.", "Three."]
