"""Structural invariants of the domain types."""

from __future__ import annotations

import pytest

from wackymeter.types import (
    PerTokenMatrix,
    Qrels,
    Ranking,
    SparseVector,
    TokenizedInput,
    ValidationError,
    Vocabulary,
    rank_entries,
)


class TestVocabulary:
    def test_size_and_lookup(self):
        vocab = Vocabulary(["[CLS]", "the", "the"])  # duplicate strings allowed
        assert vocab.size == 3
        assert vocab.token_string(1) == "the"

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            Vocabulary([])


class TestRanking:
    def test_duplicate_doc_rejected(self):
        with pytest.raises(ValidationError, match="duplicate"):
            Ranking("q", [("d1", 2.0), ("d1", 1.0)])

    def test_increasing_scores_rejected(self):
        with pytest.raises(ValidationError, match="non-increasing"):
            Ranking("q", [("d1", 1.0), ("d2", 2.0)])

    def test_tie_order_enforced(self):
        with pytest.raises(ValidationError, match="ascending"):
            Ranking("q", [("d2", 1.0), ("d1", 1.0)])
        Ranking("q", [("d1", 1.0), ("d2", 1.0)])  # valid

    def test_rank_entries_helper(self):
        scores = {"b": 1.0, "a": 1.0, "c": 2.0}
        assert rank_entries(scores) == [("c", 2.0), ("a", 1.0), ("b", 1.0)]


class TestPerTokenMatrix:
    def test_positions_strictly_increasing(self):
        with pytest.raises(ValidationError, match="increasing"):
            PerTokenMatrix("m", [(0, {}), (0, {})])

    def test_cls_position_must_exist(self):
        with pytest.raises(ValidationError, match="cls"):
            PerTokenMatrix("m", [(0, {})], cls_position=5)


class TestQrelsAndVectors:
    def test_negative_grade_rejected(self):
        with pytest.raises(ValidationError):
            Qrels({("q", "d"): -1})

    def test_vector_validation(self):
        vec = SparseVector("v", {1: 0.5})
        vec.validate_against(2)
        with pytest.raises(ValidationError, match="out of range"):
            vec.validate_against(1)
        with pytest.raises(ValidationError, match="positive"):
            SparseVector("v", {1: -0.5}).validate_against(5)

    def test_tokenized_input_flags(self):
        assert TokenizedInput("x", []).is_empty
        assert TokenizedInput("x", [1, 1, 2]).distinct_tokens() == {1, 2}
