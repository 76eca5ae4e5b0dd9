"""Independent brute-force oracles used to pin expected values.

Everything here recomputes results from first principles on top of the
domain types only — no index structures, no shared scoring code — so a bug
in the library cannot hide in its own oracle.
"""

from __future__ import annotations

import math

from wackymeter.types import Qrels, Ranking, SparseVector, TokenizedInput


def naive_dot(query: SparseVector, doc: SparseVector) -> float:
    """Inner product summed in ascending token-id order."""
    score = 0.0
    for token_id in sorted(query.weights):
        if token_id in doc.weights:
            score += query.weights[token_id] * doc.weights[token_id]
    return score


def naive_retrieval(
    query: SparseVector, docs: list[SparseVector], k: int
) -> list[tuple[str, float]]:
    scored = []
    for doc in docs:
        s = naive_dot(query, doc)
        if s != 0.0:
            scored.append((doc.id, s))
    scored.sort(key=lambda e: (-e[1], e[0]))
    return scored[:k]


def naive_wackiness(
    inputs: list[TokenizedInput],
    vectors: list[SparseVector],
    documents: list[TokenizedInput],
    doc_vectors: list[SparseVector],
    k: int,
) -> dict[int, tuple[int, float, float]]:
    """Recompute the full table: token -> (occurrences, mean importance, wackiness).

    Exhaustive retrieval, term statistics recounted from raw token lists,
    plain averaging and min-max normalization.
    """
    n_docs = len(documents)
    doc_tokens = {d.id: list(d.tokens) for d in documents}
    df: dict[int, int] = {}
    for d in documents:
        for t in set(d.tokens):
            df[t] = df.get(t, 0) + 1

    values: dict[int, list[float]] = {}
    for inp, vec in zip(inputs, vectors):
        t_exp = set(vec.weights) - set(inp.tokens)
        retrieved = naive_retrieval(vec, doc_vectors, k)
        if not retrieved:
            continue
        ret_ids = [doc_id for doc_id, _ in retrieved]
        total_len = sum(len(doc_tokens[d]) for d in ret_ids)
        for token in sorted(t_exp):
            count = sum(doc_tokens[d].count(token) for d in ret_ids)
            if count == 0 or total_len == 0:
                s = 0.0
            else:
                s = (count / total_len) * math.log(n_docs / df[token])
            values.setdefault(token, []).append(s)

    means = {t: sum(v) / len(v) for t, v in values.items()}
    if not means:
        return {}
    low, high = min(means.values()), max(means.values())
    table = {}
    for t, mean in means.items():
        wacky = 0.0 if high == low else 1.0 - (mean - low) / (high - low)
        table[t] = (len(values[t]), mean, wacky)
    return table


def naive_bin_means(scores: list[float], bins: int) -> list[float]:
    """Equal-fraction binning of an already-ranked score list."""
    m = len(scores)
    means = []
    for i in range(bins):
        chunk = scores[i * m // bins : (i + 1) * m // bins]
        means.append(sum(chunk) / len(chunk) if chunk else 0.0)
    return means


def naive_flops(batch_rows: list[dict[int, float]], vocab_size: int) -> float:
    """FLOPs regularizer over a dense view of the batch."""
    n = len(batch_rows)
    total = 0.0
    for j in range(vocab_size):
        s = sum(row.get(j, 0.0) for row in batch_rows)
        total += (s / n) ** 2
    return total


def naive_l1(batch_rows: list[dict[int, float]], vocab_size: int) -> float:
    n = len(batch_rows)
    total = 0.0
    for row in batch_rows:
        for j in range(vocab_size):
            total += abs(row.get(j, 0.0))
    return total / n


# ---------------------------------------------------------------------------
# Reference effectiveness evaluator (loop-and-set based, order-only)
# ---------------------------------------------------------------------------


def reference_mrr(run: list[Ranking], qrels: Qrels, k: int) -> dict[str, float]:
    out = {}
    judged_queries = {qid for qid, _ in qrels.judgments}
    for ranking in run:
        if ranking.query_id not in judged_queries:
            continue
        relevant = {
            did
            for (qid, did), g in qrels.judgments.items()
            if qid == ranking.query_id and g >= 1
        }
        score = 0.0
        for pos, (did, _) in enumerate(ranking.entries):
            if pos >= k:
                break
            if did in relevant:
                score = 1.0 / (pos + 1)
                break
        out[ranking.query_id] = score
    return out


def reference_recall(run: list[Ranking], qrels: Qrels, k: int) -> dict[str, float]:
    out = {}
    for ranking in run:
        relevant = {
            did
            for (qid, did), g in qrels.judgments.items()
            if qid == ranking.query_id and g >= 1
        }
        if not relevant:
            continue
        hits = sum(1 for did, _ in ranking.entries[:k] if did in relevant)
        out[ranking.query_id] = hits / len(relevant)
    return out


def reference_ndcg(run: list[Ranking], qrels: Qrels, k: int) -> dict[str, float]:
    out = {}
    for ranking in run:
        grades = {
            did: g
            for (qid, did), g in qrels.judgments.items()
            if qid == ranking.query_id
        }
        if not grades or max(grades.values()) == 0:
            continue
        gains = [2**grades.get(did, 0) - 1 for did, _ in ranking.entries[:k]]
        dcg = sum(g / math.log2(i + 2) for i, g in enumerate(gains))
        ideal_gains = sorted((2**g - 1 for g in grades.values()), reverse=True)[:k]
        idcg = sum(g / math.log2(i + 2) for i, g in enumerate(ideal_gains))
        out[ranking.query_id] = dcg / idcg
    return out
