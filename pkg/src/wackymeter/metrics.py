"""Ranking-effectiveness measures: MRR@k, Recall@k, NDCG@k.

All measures depend only on the ordering of each ranking, never on raw
scores.  NDCG follows the trec_eval convention: gain 2^grade - 1, discount
1 / log2(rank + 1).  The relevance threshold for the binary measures
(MRR, Recall) defaults to grade >= 1 and is configurable.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .types import Qrels, Ranking, ValidationError

log = logging.getLogger("wackymeter.metrics")


@dataclass
class EvalResult:
    measure: str
    per_query: dict[str, float]
    mean: float


def _grades_by_query(qrels: Qrels) -> dict[str, dict[str, int]]:
    grouped: dict[str, dict[str, int]] = {}
    for (qid, did), grade in qrels.judgments.items():
        grouped.setdefault(qid, {})[did] = grade
    return grouped


def _mean(per_query: dict[str, float]) -> float:
    return sum(per_query.values()) / len(per_query) if per_query else 0.0


def mrr_at_k(
    run: list[Ranking], qrels: Qrels, k: int, rel_threshold: int = 1
) -> EvalResult:
    """Reciprocal rank of the first relevant document within the top k."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    grades = _grades_by_query(qrels)
    per_query: dict[str, float] = {}
    for ranking in run:
        judged = grades.get(ranking.query_id)
        if judged is None:
            log.info("query %r has no qrels; excluded from MRR", ranking.query_id)
            continue
        value = 0.0
        for rank, (doc_id, _) in enumerate(ranking.entries[:k], start=1):
            if judged.get(doc_id, 0) >= rel_threshold:
                value = 1.0 / rank
                break
        per_query[ranking.query_id] = value
    return EvalResult(f"MRR@{k}", per_query, _mean(per_query))


def recall_at_k(
    run: list[Ranking], qrels: Qrels, k: int, rel_threshold: int = 1
) -> EvalResult:
    """Fraction of a query's relevant documents retrieved within the top k."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    grades = _grades_by_query(qrels)
    per_query: dict[str, float] = {}
    for ranking in run:
        judged = grades.get(ranking.query_id)
        if judged is None:
            log.info("query %r has no qrels; excluded from Recall", ranking.query_id)
            continue
        relevant = {d for d, g in judged.items() if g >= rel_threshold}
        if not relevant:
            log.info(
                "query %r has no relevant documents; excluded from Recall",
                ranking.query_id,
            )
            continue
        retrieved = {doc_id for doc_id, _ in ranking.entries[:k]}
        per_query[ranking.query_id] = len(retrieved & relevant) / len(relevant)
    return EvalResult(f"Recall@{k}", per_query, _mean(per_query))


def ndcg_at_k(run: list[Ranking], qrels: Qrels, k: int) -> EvalResult:
    """Exponential-gain NDCG truncated at k, normalized by the ideal DCG."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    grades = _grades_by_query(qrels)
    per_query: dict[str, float] = {}
    for ranking in run:
        judged = grades.get(ranking.query_id)
        if judged is None or all(g == 0 for g in judged.values()):
            log.info(
                "query %r has no positive grades; excluded from NDCG",
                ranking.query_id,
            )
            continue
        dcg = 0.0
        for rank, (doc_id, _) in enumerate(ranking.entries[:k], start=1):
            grade = judged.get(doc_id, 0)
            if grade > 0:
                dcg += (2.0**grade - 1.0) / math.log2(rank + 1)
        ideal = 0.0
        for rank, grade in enumerate(
            sorted(judged.values(), reverse=True)[:k], start=1
        ):
            if grade > 0:
                ideal += (2.0**grade - 1.0) / math.log2(rank + 1)
        per_query[ranking.query_id] = dcg / ideal
    return EvalResult(f"NDCG@{k}", per_query, _mean(per_query))


def parse_measure(spec: str) -> tuple[str, int]:
    """Parse names like `MRR@10` / `recall@1000` into (kind, k)."""
    try:
        kind, k_str = spec.split("@", 1)
        k = int(k_str)
    except ValueError:
        raise ValidationError(f"malformed measure {spec!r}; expected KIND@k") from None
    kind = kind.strip().lower()
    if kind not in ("mrr", "recall", "ndcg"):
        raise ValidationError(f"unknown measure kind {kind!r}")
    if k < 1:
        raise ValidationError(f"measure cutoff must be >= 1, got {k}")
    return kind, k


def evaluate_measures(
    run: list[Ranking], qrels: Qrels, measures: list[str], rel_threshold: int = 1
) -> dict[str, EvalResult]:
    """Evaluate a batch of measure specs against one run."""
    results: dict[str, EvalResult] = {}
    for spec in measures:
        kind, k = parse_measure(spec)
        if kind == "mrr":
            result = mrr_at_k(run, qrels, k, rel_threshold)
        elif kind == "recall":
            result = recall_at_k(run, qrels, k, rel_threshold)
        else:
            result = ndcg_at_k(run, qrels, k)
        results[result.measure] = result
    return results


def max_cutoff(measures: list[str]) -> int:
    """Largest k any of the measure specs needs from a ranking."""
    return max(parse_measure(spec)[1] for spec in measures)
