"""Impact index: transposition, exactness vs the oracle, tie handling."""

from __future__ import annotations

import pytest

from oracles import naive_retrieval
from wackymeter.impact import (
    build_impact_index,
    exhaustive_search,
    load_impact_index,
    save_impact_index,
    search,
)
from wackymeter.synthetic import generate_synthetic_model
from wackymeter.types import SparseVector, ValidationError


class TestBuild:
    def test_direct_transposition(self):
        vectors = [
            SparseVector("d1", {1: 2.0}),
            SparseVector("d2", {1: 1.0, 3: 0.5}),
        ]
        index = build_impact_index(vectors)
        assert index.postings == {1: [("d1", 2.0), ("d2", 1.0)], 3: [("d2", 0.5)]}
        assert index.doc_ids == ["d1", "d2"]

    def test_empty_vector_tracked_but_not_posted(self):
        index = build_impact_index([SparseVector("d3", {})])
        assert index.doc_ids == ["d3"]
        assert index.postings == {}

    def test_rebuild_identical(self, small_model):
        a = build_impact_index(small_model.doc_vectors)
        b = build_impact_index(small_model.doc_vectors)
        assert a.postings == b.postings and a.doc_ids == b.doc_ids

    def test_duplicate_id_rejected(self):
        vectors = [SparseVector("d1", {1: 1.0}), SparseVector("d1", {2: 1.0})]
        with pytest.raises(ValidationError, match="duplicate"):
            build_impact_index(vectors)


class TestSearch:
    def test_hand_dot_product(self):
        index = build_impact_index(
            [SparseVector("d1", {1: 2.0}), SparseVector("d2", {1: 1.0, 3: 0.5})]
        )
        ranking = search(SparseVector("q", {1: 1.0}), index, 10)
        assert ranking.entries == [("d1", 2.0), ("d2", 1.0)]

    def test_orthogonal_query_empty(self, toy_corpus):
        _, vectors = toy_corpus
        index = build_impact_index(vectors)
        assert search(SparseVector("q", {9: 4.0}), index, 5).entries == []

    def test_empty_query_empty(self, toy_corpus):
        _, vectors = toy_corpus
        index = build_impact_index(vectors)
        assert search(SparseVector("q", {}), index, 5).entries == []

    def test_k_zero_rejected(self, toy_corpus):
        _, vectors = toy_corpus
        index = build_impact_index(vectors)
        with pytest.raises(ValidationError):
            search(SparseVector("q", {1: 1.0}), index, 0)
        with pytest.raises(ValidationError):
            exhaustive_search(SparseVector("q", {1: 1.0}), vectors, 0)

    def test_tie_break_ascending_doc_id(self):
        vectors = [
            SparseVector("db", {1: 1.0}),
            SparseVector("da", {1: 1.0}),
            SparseVector("dc", {1: 2.0}),
        ]
        index = build_impact_index(vectors)
        ranking = search(SparseVector("q", {1: 1.0}), index, 3)
        assert [d for d, _ in ranking.entries] == ["dc", "da", "db"]

    def test_single_doc_iff_positive_score(self):
        vectors = [SparseVector("d1", {2: 1.5})]
        hit = exhaustive_search(SparseVector("q", {2: 2.0}), vectors, 1)
        miss = exhaustive_search(SparseVector("q", {3: 2.0}), vectors, 1)
        assert len(hit) == 1 and len(miss) == 0

    @pytest.mark.parametrize("seed", range(4))
    def test_search_matches_exhaustive_and_naive(self, seed):
        model = generate_synthetic_model(300, 150, 20, "mixed:0.5", seed)
        index = build_impact_index(model.doc_vectors)
        for qv in model.query_vectors:
            via_index = search(qv, index, 10)
            via_scan = exhaustive_search(qv, model.doc_vectors, 10)
            assert via_index.entries == via_scan.entries
            assert via_index.entries == naive_retrieval(qv, model.doc_vectors, 10)

    def test_score_symmetry_postings_vs_vectors(self, small_model):
        """Σ over postings equals the ascending-token-id sum over raw vectors."""
        index = build_impact_index(small_model.doc_vectors)
        by_id = {v.id: v for v in small_model.doc_vectors}
        for qv in small_model.query_vectors[:10]:
            ranking = search(qv, index, len(small_model.doc_vectors))
            for doc_id, score in ranking.entries:
                doc = by_id[doc_id]
                expected = 0.0
                for t, qw in qv.sorted_items():
                    if t in doc.weights:
                        expected += qw * doc.weights[t]
                assert score == expected  # identical summation order: exact

    def test_monotone_under_document_addition(self, small_model):
        base = small_model.doc_vectors[:50]
        grown = small_model.doc_vectors[:51]
        qv = small_model.query_vectors[0]
        before = exhaustive_search(qv, base, len(grown)).entries
        after = exhaustive_search(qv, grown, len(grown)).entries
        after_ids = {d: i for i, (d, _) in enumerate(after)}
        strictly = [
            (a, b)
            for i, (a, sa) in enumerate(before)
            for b, sb in before[i + 1 :]
            if sa != sb
        ]
        for a, b in strictly:
            assert after_ids[a] < after_ids[b]


class TestPersistence:
    def test_roundtrip_bytes(self, tmp_path, small_model):
        index = build_impact_index(small_model.doc_vectors)
        path = tmp_path / "impact_index.json"
        save_impact_index(index, path)
        loaded = load_impact_index(path)
        assert loaded.postings == index.postings
        assert loaded.doc_ids == index.doc_ids
        again = tmp_path / "again.json"
        save_impact_index(loaded, again)
        assert path.read_bytes() == again.read_bytes()

    def test_posting_lengths_rows(self):
        index = build_impact_index(
            [SparseVector("d1", {1: 2.0}), SparseVector("d2", {1: 1.0, 3: 0.5})]
        )
        assert index.posting_lengths() == [[1, 2], [3, 1]]
