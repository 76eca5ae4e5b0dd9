"""Synthetic corpus/query/vector generator for desk-scale end-to-end runs.

Documents are drawn from per-topic token distributions (disjoint vocabulary
slices, Dirichlet-weighted), so nearest neighbors share vocabulary.  Each
query is sampled from a source document's tokens and judged relevant to it.

Vectors carry the input's own tokens plus expansion tokens from one of two
arms:

* ``lexical`` — drawn from the token multiset of same-topic documents,
  emulating expansion grounded in co-occurring text;
* ``random``  — drawn uniformly from the whole vocabulary, emulating
  ungrounded expansion.

The ``mixed`` profile picks the random arm with probability p per expansion
token.  ``lexical-overlap`` and ``random-token`` are exactly ``mixed`` at
p=0 and p=1, sharing one code path, so boundary profiles are byte-identical
to their mixture counterparts for the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import Qrels, SparseVector, TokenizedInput, ValidationError, Vocabulary

PROFILE_LEXICAL = "lexical-overlap"
PROFILE_RANDOM = "random-token"

ARM_LEXICAL = "lexical"
ARM_RANDOM = "random"


@dataclass
class SyntheticModel:
    """A complete seeded fixture: collection, queries, vectors, judgments."""

    vocabulary: Vocabulary
    documents: list[TokenizedInput]
    queries: list[TokenizedInput]
    doc_vectors: list[SparseVector]
    query_vectors: list[SparseVector]
    qrels: Qrels
    doc_topics: dict[str, int]
    # input id -> {expansion token -> arm that injected it}
    expansion_arms: dict[str, dict[int, str]]


def parse_profile(profile: str) -> float:
    """Map a profile name to its random-arm probability."""
    if profile == PROFILE_LEXICAL:
        return 0.0
    if profile == PROFILE_RANDOM:
        return 1.0
    if profile.startswith("mixed:"):
        p = float(profile.split(":", 1)[1])
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"mixture probability must be in [0, 1], got {p}")
        return p
    raise ValidationError(
        f"unknown expansion profile {profile!r}; expected "
        f"'{PROFILE_LEXICAL}', '{PROFILE_RANDOM}' or 'mixed:<p>'"
    )


def generate_synthetic_model(
    vocab_size: int,
    corpus_size: int,
    query_count: int,
    expansion_profile: str,
    seed: int,
) -> SyntheticModel:
    """Deterministically generate a synthetic model; identical args, identical bytes."""
    if vocab_size < 1 or corpus_size < 1 or query_count < 1:
        raise ValidationError("vocab_size, corpus_size and query_count must be >= 1")
    random_arm_p = parse_profile(expansion_profile)
    rng = np.random.default_rng(seed)

    vocab = Vocabulary([f"tok{i:05d}" for i in range(vocab_size)])

    # Disjoint per-topic vocabulary slices keep same-topic documents lexically
    # close and off-topic tokens lexically useless.
    topic_count = max(
        1, min(vocab_size, corpus_size, max(corpus_size // 25, vocab_size // 50, 1))
    )
    slice_bounds = [
        (t * vocab_size // topic_count, (t + 1) * vocab_size // topic_count)
        for t in range(topic_count)
    ]
    topic_probs: list[np.ndarray] = []
    for lo, hi in slice_bounds:
        width = max(hi - lo, 1)
        probs = rng.dirichlet(np.full(width, 0.5))
        topic_probs.append(probs)

    documents: list[TokenizedInput] = []
    doc_topics: dict[str, int] = {}
    for i in range(corpus_size):
        topic = i % topic_count
        lo, hi = slice_bounds[topic]
        length = int(rng.integers(20, 41))
        tokens = rng.choice(np.arange(lo, max(hi, lo + 1)), size=length, p=topic_probs[topic])
        doc = TokenizedInput(f"d{i:05d}", [int(t) for t in tokens])
        documents.append(doc)
        doc_topics[doc.id] = topic

    # Token multiset of each topic, the lexical arm's sampling pool.
    topic_pools: list[np.ndarray] = []
    for t in range(topic_count):
        pool = np.concatenate(
            [np.asarray(d.tokens, dtype=np.int64) for d in documents
             if doc_topics[d.id] == t] or [np.arange(*slice_bounds[t], dtype=np.int64)]
        )
        topic_pools.append(pool)

    queries: list[TokenizedInput] = []
    judgments: dict[tuple[str, str], int] = {}
    query_topics: dict[str, int] = {}
    query_sources: dict[str, str] = {}
    for i in range(query_count):
        source = documents[int(rng.integers(0, corpus_size))]
        length = int(rng.integers(3, 9))
        tokens = rng.choice(np.asarray(source.tokens, dtype=np.int64), size=length)
        query = TokenizedInput(f"q{i:04d}", [int(t) for t in tokens])
        queries.append(query)
        query_topics[query.id] = doc_topics[source.id]
        query_sources[query.id] = source.id
        judgments[(query.id, source.id)] = 1

    expansion_arms: dict[str, dict[int, str]] = {}
    doc_token_arrays = {d.id: np.asarray(d.tokens, dtype=np.int64) for d in documents}

    def make_vector(
        inp: TokenizedInput,
        topic: int,
        exp_lo: int,
        exp_hi: int,
        focus: np.ndarray | None = None,
    ) -> SparseVector:
        counts: dict[int, int] = {}
        for t in inp.tokens:
            counts[t] = counts.get(t, 0) + 1
        weights: dict[int, float] = {}
        for token_id in sorted(counts):
            weights[token_id] = counts[token_id] * float(rng.uniform(0.75, 1.25))

        arms: dict[int, str] = {}
        orig = set(counts)
        pool = topic_pools[topic]
        n_exp = int(rng.integers(exp_lo, exp_hi + 1))
        for _ in range(n_exp):
            use_random = bool(rng.random() < random_arm_p)
            token = -1
            for _attempt in range(20):
                if use_random:
                    candidate = int(rng.integers(0, vocab_size))
                elif focus is not None and rng.random() < 0.5:
                    # Queries expand toward their source document so grounded
                    # expansions actually carry retrieval signal.
                    candidate = int(focus[int(rng.integers(0, len(focus)))])
                else:
                    candidate = int(pool[int(rng.integers(0, len(pool)))])
                if candidate not in orig and candidate not in weights:
                    token = candidate
                    break
            if token < 0:
                continue
            weights[token] = float(rng.uniform(0.2, 0.9))
            arms[token] = ARM_RANDOM if use_random else ARM_LEXICAL
        expansion_arms[inp.id] = arms
        return SparseVector(inp.id, weights)

    doc_vectors = [
        make_vector(doc, doc_topics[doc.id], 4, 10) for doc in documents
    ]
    query_vectors = [
        make_vector(
            query,
            query_topics[query.id],
            3,
            8,
            focus=doc_token_arrays[query_sources[query.id]],
        )
        for query in queries
    ]

    return SyntheticModel(
        vocabulary=vocab,
        documents=documents,
        queries=queries,
        doc_vectors=doc_vectors,
        query_vectors=query_vectors,
        qrels=Qrels(judgments),
        doc_topics=doc_topics,
        expansion_arms=expansion_arms,
    )
