"""Collection statistics, TF-IDF support, and the BM25+RM3 expansion baseline.

Term statistics live in the model-vocabulary token space (the `tokens`
field of inputs), so lexical importance and expansion tokens are directly
comparable.  All logarithms are natural.

BM25 uses the Okapi scoring function with the non-negative Lucene idf,
ln(1 + (N - df + 0.5) / (df + 0.5)), and defaults k1=0.9, b=0.4 — the usual
passage-ranking baseline configuration.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .types import Ranking, SparseVector, TokenizedInput, ValidationError, rank_entries

DEFAULT_K1 = 0.9
DEFAULT_B = 0.4

LEXICAL_INDEX_FORMAT = "wackymeter-lexical-index/1"


@dataclass
class CollectionStats:
    """Document-frequency and length statistics over a background collection."""

    doc_count: int
    doc_freq: dict[int, int]
    doc_len: dict[str, int]
    total_len: int

    @property
    def avg_doc_len(self) -> float:
        return self.total_len / self.doc_count if self.doc_count else 0.0


@dataclass
class LexicalIndex:
    """Term-frequency postings plus collection stats for exact BM25 scoring."""

    stats: CollectionStats
    postings: dict[int, list[tuple[str, int]]]
    doc_tf: dict[str, dict[int, int]] = field(repr=False, default_factory=dict)

    def count(self, token_id: int, doc_id: str) -> int:
        return self.doc_tf.get(doc_id, {}).get(token_id, 0)


def build_lexical_index(corpus: list[TokenizedInput]) -> LexicalIndex:
    """Build postings and stats from a validated corpus; deterministic."""
    if not corpus:
        raise ValidationError("cannot index an empty corpus")
    doc_tf: dict[str, dict[int, int]] = {}
    doc_len: dict[str, int] = {}
    for doc in corpus:
        if doc.id in doc_tf:
            raise ValidationError(f"duplicate doc id {doc.id!r}")
        counts: dict[int, int] = {}
        for t in doc.tokens:
            counts[t] = counts.get(t, 0) + 1
        doc_tf[doc.id] = counts
        doc_len[doc.id] = len(doc.tokens)

    postings: dict[int, list[tuple[str, int]]] = {}
    doc_freq: dict[int, int] = {}
    for doc_id in sorted(doc_tf):
        for token_id, tf in doc_tf[doc_id].items():
            postings.setdefault(token_id, []).append((doc_id, tf))
            doc_freq[token_id] = doc_freq.get(token_id, 0) + 1

    stats = CollectionStats(
        doc_count=len(corpus),
        doc_freq=doc_freq,
        doc_len=doc_len,
        total_len=sum(doc_len.values()),
    )
    return LexicalIndex(stats, postings, doc_tf)


def idf(token_id: int, stats: CollectionStats) -> float | None:
    """ln(N / df); None for df = 0, which callers must never multiply."""
    df = stats.doc_freq.get(token_id, 0)
    if df == 0:
        return None
    return math.log(stats.doc_count / df)


def bm25_idf(token_id: int, stats: CollectionStats) -> float:
    df = stats.doc_freq.get(token_id, 0)
    return math.log(1.0 + (stats.doc_count - df + 0.5) / (df + 0.5))


def bm25_search(
    query: TokenizedInput,
    index: LexicalIndex,
    k: int,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> Ranking:
    """Exact top-k Okapi BM25 over the postings; ties broken by ascending doc id.

    Accumulation is term-at-a-time in ascending token-id order so scores are
    bit-identical to a naive per-document scorer using the same order.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if query.is_empty:
        return Ranking(query.id, [])

    qtf: dict[int, int] = {}
    for t in query.tokens:
        qtf[t] = qtf.get(t, 0) + 1

    avgdl = index.stats.avg_doc_len
    scores: dict[str, float] = {}
    for token_id in sorted(qtf):
        plist = index.postings.get(token_id)
        if not plist:
            continue
        token_idf = bm25_idf(token_id, index.stats)
        for doc_id, tf in plist:
            dl = index.stats.doc_len[doc_id]
            norm = 1.0 - b + b * (dl / avgdl) if avgdl > 0 else 1.0
            saturated = tf * (k1 + 1.0) / (tf + k1 * norm)
            scores[doc_id] = scores.get(doc_id, 0.0) + qtf[token_id] * token_idf * saturated
    return Ranking(query.id, rank_entries(scores)[:k])


def rm3_expand(
    query: TokenizedInput,
    index: LexicalIndex,
    fb_docs: int,
    fb_terms: int,
    orig_weight: float,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> SparseVector:
    """Pseudo-relevance-feedback expansion of a query into a term distribution.

    The relevance model weights each of the top fb_docs BM25 hits by its
    min-shifted, sum-normalized score and mixes per-document term
    distributions count(t, d) / len(d).  Its support is cut to the fb_terms
    strongest terms outside the original query (original-query terms keep
    their relevance-model mass), renormalized, then interpolated with the
    original query's term distribution at orig_weight.  Output sums to 1.
    """
    if fb_docs < 1 or fb_terms < 1:
        raise ValidationError("fb_docs and fb_terms must be >= 1")
    if not 0.0 <= orig_weight <= 1.0:
        raise ValidationError(f"orig_weight must be in [0, 1], got {orig_weight}")

    query_terms = set(query.tokens)
    total = len(query.tokens)
    query_dist: dict[int, float] = {}
    for t in query.tokens:
        query_dist[t] = query_dist.get(t, 0.0) + 1.0 / total

    feedback = bm25_search(query, index, fb_docs, k1, b)
    if len(feedback) == 0:
        return SparseVector(query.id, dict(query_dist))

    raw_scores = [score for _, score in feedback.entries]
    low = min(raw_scores)
    shifted = [s - low for s in raw_scores]
    mass = sum(shifted)
    if mass == 0.0:
        doc_weights = [1.0 / len(shifted)] * len(shifted)
    else:
        doc_weights = [s / mass for s in shifted]

    model: dict[int, float] = {}
    for (doc_id, _), w in zip(feedback.entries, doc_weights):
        if w == 0.0:
            continue
        dl = index.stats.doc_len[doc_id]
        if dl == 0:
            continue
        for token_id, tf in index.doc_tf[doc_id].items():
            model[token_id] = model.get(token_id, 0.0) + w * tf / dl

    expansion = [(t, p) for t, p in model.items() if t not in query_terms]
    expansion.sort(key=lambda e: (-e[1], e[0]))
    kept = {t for t, _ in expansion[:fb_terms]} | (query_terms & set(model))
    truncated = {t: p for t, p in model.items() if t in kept}
    model_mass = sum(truncated.values())
    if model_mass == 0.0:
        return SparseVector(query.id, dict(query_dist))
    rm = {t: p / model_mass for t, p in truncated.items()}

    combined: dict[int, float] = {}
    for t, p in query_dist.items():
        combined[t] = orig_weight * p
    for t, p in rm.items():
        combined[t] = combined.get(t, 0.0) + (1.0 - orig_weight) * p
    return SparseVector(query.id, {t: p for t, p in combined.items() if p > 0.0})


# ---------------------------------------------------------------------------
# Persistence: versioned JSON, canonical ordering
# ---------------------------------------------------------------------------


def save_lexical_index(index: LexicalIndex, path: str | Path) -> None:
    payload = {
        "format": LEXICAL_INDEX_FORMAT,
        "doc_count": index.stats.doc_count,
        "total_len": index.stats.total_len,
        "doc_len": {d: index.stats.doc_len[d] for d in sorted(index.stats.doc_len)},
        "postings": {
            str(t): index.postings[t] for t in sorted(index.postings)
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, separators=(",", ":"))
        fh.write("\n")


def load_lexical_index(path: str | Path) -> LexicalIndex:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != LEXICAL_INDEX_FORMAT:
        raise ValidationError(
            f"{path}: unsupported index format {payload.get('format')!r}"
        )
    postings = {
        int(t): [(doc_id, int(tf)) for doc_id, tf in plist]
        for t, plist in payload["postings"].items()
    }
    doc_freq = {t: len(plist) for t, plist in postings.items()}
    doc_tf: dict[str, dict[int, int]] = {d: {} for d in payload["doc_len"]}
    for t, plist in postings.items():
        for doc_id, tf in plist:
            doc_tf[doc_id][t] = tf
    stats = CollectionStats(
        doc_count=int(payload["doc_count"]),
        doc_freq=doc_freq,
        doc_len={d: int(n) for d, n in payload["doc_len"].items()},
        total_len=int(payload["total_len"]),
    )
    return LexicalIndex(stats, postings, doc_tf)
