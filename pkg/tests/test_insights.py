import json

import numpy as np
import pytest

from coherence import make_document
from coherence.errors import MismatchedInputsError, TooShortError
from coherence.insights import (
    detect_subsections,
    export_heatmap,
    heatmap_payload,
    heatmap_payload_json,
    incoherence_points,
    jensen_shannon,
    summarize,
)
from coherence.scoring import PPDSequence


def seq_of(rows, doc_id="doc"):
    return PPDSequence(document_id=doc_id, rows=np.asarray(rows, dtype=np.float64))


def summarize_oracle(rows, n):
    """Brute force: repeatedly take the highest remaining first-quantile score,
    preferring the earlier sentence on ties."""
    scores = [row[0] for row in rows]
    remaining = list(range(len(rows)))
    chosen = []
    for _ in range(min(n, len(rows))):
        best = remaining[0]
        for i in remaining:
            if scores[i] > scores[best]:
                best = i
        chosen.append(best)
        remaining.remove(best)
    return chosen


class TestSummarize:
    def test_top_three(self):
        rows = [
            [0.5, 0.5],
            [0.9, 0.1],
            [0.2, 0.8],
            [0.7, 0.3],
        ]
        selection = summarize(seq_of(rows), 3)
        assert selection.selected == (1, 3, 0)
        assert selection.scores == (0.9, 0.7, 0.5)

    def test_n_larger_than_doc(self):
        rows = [[0.5, 0.5], [0.6, 0.4]]
        selection = summarize(seq_of(rows), 10)
        assert set(selection.selected) == {0, 1}

    def test_tie_prefers_earlier_sentence(self):
        rows = [[0.5, 0.5], [0.5, 0.5], [0.1, 0.9]]
        assert summarize(seq_of(rows), 2).selected == (0, 1)

    def test_scores_non_increasing(self):
        rng = np.random.default_rng(2)
        rows = rng.dirichlet(np.ones(6), size=15)
        selection = summarize(seq_of(rows), 7)
        assert all(a >= b for a, b in zip(selection.scores, selection.scores[1:]))

    def test_matches_oracle_on_random_fixtures(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            rows = rng.dirichlet(np.ones(10), size=20)
            n = int(rng.integers(1, 22))
            assert list(summarize(seq_of(rows), n).selected) == summarize_oracle(rows, n)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            summarize(seq_of([[1.0, 0.0]]), 0)


class TestJensenShannon:
    def test_zero_for_identical(self):
        p = np.array([0.25, 0.5, 0.25])
        assert jensen_shannon(p, p) == 0.0

    def test_disjoint_support_is_ln2(self):
        p = np.array([1.0, 0.0])
        q = np.array([0.0, 1.0])
        assert jensen_shannon(p, q) == pytest.approx(np.log(2), abs=1e-12)

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            p = rng.dirichlet(np.ones(8))
            q = rng.dirichlet(np.ones(8))
            d1 = jensen_shannon(p, q)
            d2 = jensen_shannon(q, p)
            assert d1 == pytest.approx(d2, abs=1e-12)
            assert 0.0 <= d1 <= np.log(2) + 1e-12

    def test_zero_iff_equal(self):
        rng = np.random.default_rng(5)
        p = rng.dirichlet(np.ones(5))
        q = rng.dirichlet(np.ones(5))
        assert jensen_shannon(p, q) > 1e-12 or np.allclose(p, q, atol=1e-12)


class TestIncoherencePoints:
    def test_identical_rows_no_boundary(self):
        seq = seq_of([[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]])
        assert incoherence_points(seq, threshold=0.0) == []

    def test_one_hot_jump_detected(self):
        seq = seq_of([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        points = incoherence_points(seq)
        assert len(points) == 1
        assert points[0].between == (1, 2)
        assert points[0].divergence == pytest.approx(np.log(2), abs=1e-12)

    def test_infinite_threshold_empty(self):
        seq = seq_of([[1.0, 0.0], [0.0, 1.0]])
        assert incoherence_points(seq, threshold=np.inf) == []

    def test_sorted_by_position(self):
        seq = seq_of([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
        points = incoherence_points(seq, threshold=0.1)
        assert [p.between for p in points] == [(0, 1), (1, 2), (2, 3)]

    def test_too_short(self):
        with pytest.raises(TooShortError):
            incoherence_points(seq_of([[1.0, 0.0]]))


class TestDetectSubsections:
    def test_monotone_single_segment(self):
        rows = [[0.9, 0.1], [0.5, 0.5], [0.1, 0.9]]
        assert detect_subsections(seq_of(rows)).segments == ((0, 2),)

    def test_reset_splits(self):
        # weighted quantiles 1.2, 4.0, 8.2, 2.1, 6.0 over q=10; delta 10/3
        def row(wq):
            # mass split between quantile 1 and 10 to hit the target mean
            p10 = (wq - 1) / 9
            out = np.zeros(10)
            out[0] = 1 - p10
            out[9] = p10
            return out

        rows = [row(v) for v in (1.2, 4.0, 8.2, 2.1, 6.0)]
        assert detect_subsections(seq_of(rows)).segments == ((0, 2), (3, 4))

    def test_custom_delta(self):
        rows = [[0.1, 0.9], [0.9, 0.1]]  # wq 1.9 then 1.1
        assert detect_subsections(seq_of(rows), drop_delta=0.5).segments == ((0, 0), (1, 1))
        assert detect_subsections(seq_of(rows), drop_delta=2.0).segments == ((0, 1),)

    def test_segments_partition_range(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            rows = rng.dirichlet(np.ones(6), size=int(rng.integers(1, 15)))
            segments = detect_subsections(seq_of(rows), drop_delta=0.7).segments
            flattened = [i for start, end in segments for i in range(start, end + 1)]
            assert flattened == list(range(len(rows)))

    def test_single_sentence(self):
        assert detect_subsections(seq_of([[1.0, 0.0]])).segments == ((0, 0),)


class TestExportHeatmap:
    def _fixture(self):
        doc = make_document("d", ["First one.", "Second one.", "Third one."])
        rng = np.random.default_rng(7)
        rows = rng.dirichlet(np.ones(4), size=3)
        return doc, seq_of(rows)

    def test_alignment(self):
        doc, seq = self._fixture()
        heatmap = export_heatmap(seq, doc)
        assert heatmap.rows.shape == (3, 4)
        assert len(heatmap.weighted_quantiles) == 3
        assert len(heatmap.sentence_texts) == 3

    def test_dots_equal_weighted_quantiles(self):
        from coherence.scoring import weighted_quantile

        doc, seq = self._fixture()
        heatmap = export_heatmap(seq, doc)
        for dot, row in zip(heatmap.weighted_quantiles, seq.rows):
            assert dot == weighted_quantile(row)

    def test_mismatched_lengths(self):
        doc, seq = self._fixture()
        with pytest.raises(MismatchedInputsError):
            export_heatmap(seq, make_document("d", ["Only one."]))

    def test_json_round_trip_precision(self):
        doc, seq = self._fixture()
        heatmap = export_heatmap(seq, doc)
        boundaries = incoherence_points(seq, threshold=0.0)
        segments = detect_subsections(seq, drop_delta=0.5)
        summary = summarize(seq, 2)
        payload = heatmap_payload(heatmap, boundaries, segments, summary)
        back = json.loads(heatmap_payload_json(payload))
        assert back["sentences"] == list(heatmap.sentence_texts)
        assert back["summary"] == list(summary.selected)
        restored = np.array(back["ppd"])
        assert np.abs(restored - seq.rows).max() <= 1e-9
        assert np.abs(np.array(back["wq"]) - np.array(heatmap.weighted_quantiles)).max() <= 1e-9
        for (i, j, div), point in zip(back["boundaries"], boundaries):
            assert (i, j) == point.between
            assert abs(div - point.divergence) <= 1e-9
