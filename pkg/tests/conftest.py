from __future__ import annotations

import pytest

from wackymeter.impact import build_impact_index
from wackymeter.lexical import build_lexical_index
from wackymeter.synthetic import generate_synthetic_model
from wackymeter.types import SparseVector, TokenizedInput


@pytest.fixture(scope="session")
def small_model():
    """One shared desk-scale synthetic model (mixed profile, seed 7)."""
    return generate_synthetic_model(200, 120, 30, "mixed:0.5", 7)


@pytest.fixture(scope="session")
def small_indices(small_model):
    return (
        build_impact_index(small_model.doc_vectors),
        build_lexical_index(small_model.documents),
    )


@pytest.fixture
def toy_corpus():
    """Five tiny documents over a 10-token vocabulary, for hand-checkable math."""
    docs = [
        TokenizedInput("d1", [1, 1, 2]),
        TokenizedInput("d2", [2]),
        TokenizedInput("d3", [3, 4, 4, 5]),
        TokenizedInput("d4", [1, 5, 6]),
        TokenizedInput("d5", []),
    ]
    vectors = [
        SparseVector("d1", {1: 2.0, 2: 0.5}),
        SparseVector("d2", {2: 1.0, 3: 0.5}),
        SparseVector("d3", {3: 1.5, 4: 2.0, 5: 0.25}),
        SparseVector("d4", {1: 1.0, 5: 0.75, 6: 1.25}),
        SparseVector("d5", {}),
    ]
    return docs, vectors
