"""Inverted impact index with exact top-k dot-product retrieval.

Scoring is the plain inner product of sparse vectors, the ranking function
of SPLADE-style models.  Accumulation is term-at-a-time; every per-document
score sums its contributions in ascending token-id order, so results are
bit-identical to the brute-force oracle and independent of how queries are
scheduled across workers.

DaaT-style pruning (WAND, MaxScore) is deliberately out of scope: exactness
and reproducibility dominate at the corpus sizes this toolkit targets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .io import fmt_float
from .types import Ranking, SparseVector, ValidationError, rank_entries

IMPACT_INDEX_FORMAT = "wackymeter-impact-index/1"


@dataclass
class ImpactIndex:
    """Postings of (doc_id, impact weight) per token, sorted by doc id."""

    postings: dict[int, list[tuple[str, float]]]
    doc_ids: list[str]

    def posting_lengths(self) -> list[list]:
        """Rows for the `token_id,posting_length` distribution report."""
        return [[t, len(self.postings[t])] for t in sorted(self.postings)]


def build_impact_index(vectors: list[SparseVector]) -> ImpactIndex:
    """Transpose sparse vectors into postings; rebuilding is reproducible."""
    doc_ids: list[str] = []
    seen: set[str] = set()
    by_doc: dict[str, SparseVector] = {}
    for vec in vectors:
        if vec.id in seen:
            raise ValidationError(f"duplicate vector id {vec.id!r}")
        seen.add(vec.id)
        doc_ids.append(vec.id)
        by_doc[vec.id] = vec

    postings: dict[int, list[tuple[str, float]]] = {}
    for doc_id in sorted(by_doc):
        for token_id, weight in by_doc[doc_id].weights.items():
            if weight <= 0:
                raise ValidationError(
                    f"vector {doc_id!r}: non-positive impact {weight} for "
                    f"token {token_id}"
                )
            postings.setdefault(token_id, []).append((doc_id, weight))
    return ImpactIndex(postings, doc_ids)


def search(query: SparseVector, index: ImpactIndex, k: int) -> Ranking:
    """Exact top-k by inner product; ties by ascending doc id, zeros excluded."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if not query.weights:
        return Ranking(query.id, [])

    scores: dict[str, float] = {}
    for token_id, q_weight in query.sorted_items():
        plist = index.postings.get(token_id)
        if not plist:
            continue
        for doc_id, d_weight in plist:
            scores[doc_id] = scores.get(doc_id, 0.0) + q_weight * d_weight

    entries = [(d, s) for d, s in rank_entries(scores) if s != 0.0]
    return Ranking(query.id, entries[:k])


def exhaustive_search(
    query: SparseVector, vectors: list[SparseVector], k: int
) -> Ranking:
    """Brute-force oracle: score every document naively, same contract as search."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if not query.weights:
        return Ranking(query.id, [])

    q_items = query.sorted_items()
    scores: dict[str, float] = {}
    for vec in vectors:
        weights = vec.weights
        score = 0.0
        for token_id, q_weight in q_items:
            d_weight = weights.get(token_id)
            if d_weight is not None:
                score += q_weight * d_weight
        if score != 0.0:
            scores[vec.id] = score
    return Ranking(query.id, rank_entries(scores)[:k])


# ---------------------------------------------------------------------------
# Persistence: versioned JSON, canonical ordering
# ---------------------------------------------------------------------------


def save_impact_index(index: ImpactIndex, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write('{"format":%s,"doc_ids":%s,"postings":{' % (
            json.dumps(IMPACT_INDEX_FORMAT),
            json.dumps(index.doc_ids, ensure_ascii=False),
        ))
        first = True
        for token_id in sorted(index.postings):
            plist = ",".join(
                "[%s,%s]" % (json.dumps(doc_id, ensure_ascii=False), fmt_float(w))
                for doc_id, w in index.postings[token_id]
            )
            fh.write('%s"%d":[%s]' % ("" if first else ",", token_id, plist))
            first = False
        fh.write("}}\n")


def load_impact_index(path: str | Path) -> ImpactIndex:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != IMPACT_INDEX_FORMAT:
        raise ValidationError(
            f"{path}: unsupported index format {payload.get('format')!r}"
        )
    postings = {
        int(t): [(doc_id, float(w)) for doc_id, w in plist]
        for t, plist in payload["postings"].items()
    }
    return ImpactIndex(postings, list(payload["doc_ids"]))
