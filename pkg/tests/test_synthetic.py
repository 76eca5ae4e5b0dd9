"""Synthetic generator: determinism, profile semantics, structural guarantees."""

from __future__ import annotations

import pytest

from wackymeter.synthetic import ARM_LEXICAL, ARM_RANDOM, generate_synthetic_model
from wackymeter.types import ValidationError


def _flatten(model):
    return (
        [(d.id, tuple(d.tokens)) for d in model.documents],
        [(q.id, tuple(q.tokens)) for q in model.queries],
        [(v.id, tuple(sorted(v.weights.items()))) for v in model.doc_vectors],
        [(v.id, tuple(sorted(v.weights.items()))) for v in model.query_vectors],
        sorted(model.qrels.judgments.items()),
    )


class TestDeterminism:
    def test_same_seed_identical(self):
        a = generate_synthetic_model(100, 50, 10, "random-token", 7)
        b = generate_synthetic_model(100, 50, 10, "random-token", 7)
        assert _flatten(a) == _flatten(b)

    def test_different_seed_differs(self):
        a = generate_synthetic_model(100, 50, 10, "random-token", 7)
        b = generate_synthetic_model(100, 50, 10, "random-token", 8)
        assert _flatten(a) != _flatten(b)

    def test_mixed_zero_equals_lexical_overlap(self):
        a = generate_synthetic_model(100, 50, 10, "mixed:0.0", 7)
        b = generate_synthetic_model(100, 50, 10, "lexical-overlap", 7)
        assert _flatten(a) == _flatten(b)

    def test_mixed_one_equals_random_token(self):
        a = generate_synthetic_model(100, 50, 10, "mixed:1.0", 7)
        b = generate_synthetic_model(100, 50, 10, "random-token", 7)
        assert _flatten(a) == _flatten(b)


class TestStructure:
    def test_lexical_expansions_occur_in_same_topic_docs(self):
        model = generate_synthetic_model(150, 60, 15, "lexical-overlap", 3)
        topic_tokens: dict[int, set[int]] = {}
        for doc in model.documents:
            topic_tokens.setdefault(model.doc_topics[doc.id], set()).update(doc.tokens)
        for doc in model.documents:
            arms = model.expansion_arms[doc.id]
            for token, arm in arms.items():
                assert arm == ARM_LEXICAL
                assert token in topic_tokens[model.doc_topics[doc.id]]

    def test_vectors_cover_original_tokens(self):
        model = generate_synthetic_model(100, 40, 8, "mixed:0.5", 1)
        for doc, vec in zip(model.documents, model.doc_vectors):
            assert set(doc.tokens) <= set(vec.weights)
            assert all(w > 0 for w in vec.weights.values())

    def test_expansion_arms_recorded(self):
        model = generate_synthetic_model(100, 40, 8, "mixed:0.5", 1)
        arms = {a for arms in model.expansion_arms.values() for a in arms.values()}
        assert arms <= {ARM_LEXICAL, ARM_RANDOM}
        assert ARM_LEXICAL in arms and ARM_RANDOM in arms

    def test_every_query_has_a_relevant_source_doc(self):
        model = generate_synthetic_model(100, 40, 8, "lexical-overlap", 2)
        doc_ids = {d.id for d in model.documents}
        for query in model.queries:
            judged = [d for (q, d) in model.qrels.judgments if q == query.id]
            assert len(judged) == 1 and judged[0] in doc_ids

    def test_rejects_bad_profile(self):
        with pytest.raises(ValidationError):
            generate_synthetic_model(10, 5, 2, "nonsense", 0)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValidationError):
            generate_synthetic_model(0, 5, 2, "lexical-overlap", 0)
