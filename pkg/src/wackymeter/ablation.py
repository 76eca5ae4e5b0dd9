"""Token-removal ablation: wacky-ranked removal vs a random baseline.

At each threshold N the top-N tokens by wackiness are removed from every
query vector (original query tokens are never touched; removal only zeroes
expansion weights, nothing is re-encoded) and effectiveness is re-measured.
The baseline removes N tokens sampled uniformly without replacement from a
configurable pool, repeated with per-repeat derived seeds; its spread is
summarized as mean ± 2·std (sample standard deviation).  Random draws are
prefixes of one permutation per repeat, so removal sets, like the wacky
arm's, grow monotonically with N.

Two endpoint conditions anchor the plots: the untouched vectors and the
vectors restricted to their original tokens (no expansion at all).  The
document index is never modified; this is a query-side protocol.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .impact import ImpactIndex, search
from .metrics import evaluate_measures, max_cutoff
from .types import Qrels, SparseVector, TokenizedInput, ValidationError
from .wackiness import ExpansionRecord, TokenWackinessTable, expansion_set

POOL_EXPANSION_OBSERVED = "expansion-observed"
POOL_FULL_VOCABULARY = "full-vocabulary"

DEFAULT_MEASURES = ["MRR@10", "Recall@10", "Recall@100", "Recall@1000"]


@dataclass
class AblationConfig:
    thresholds: list[int]
    repeats: int = 10
    seed: int = 0
    measures: list[str] = field(default_factory=lambda: list(DEFAULT_MEASURES))
    removal_pool: str = POOL_EXPANSION_OBSERVED

    def __post_init__(self) -> None:
        if any(t < 0 for t in self.thresholds):
            raise ValidationError("thresholds must be non-negative")
        if sorted(self.thresholds) != list(self.thresholds):
            raise ValidationError("thresholds must be ascending")
        if self.repeats < 1:
            raise ValidationError("repeats must be >= 1")
        if self.removal_pool not in (POOL_EXPANSION_OBSERVED, POOL_FULL_VOCABULARY):
            raise ValidationError(
                f"unknown removal pool {self.removal_pool!r}"
            )


@dataclass
class ThresholdResult:
    threshold: int
    clamped: bool
    wacky_scores: dict[str, float]
    random_mean: dict[str, float]
    random_std: dict[str, float]


@dataclass
class AblationReport:
    thresholds: list[ThresholdResult]
    full: dict[str, float]
    no_expansion: dict[str, float]


def default_thresholds(scored_token_count: int) -> list[int]:
    """Logarithmic thresholds: 100, 1000, 10000, extended up to the scored count."""
    thresholds = [100, 1000, 10000]
    power = 100000
    while power <= scored_token_count:
        thresholds.append(power)
        power *= 10
    return thresholds


def remove_tokens(
    vec: SparseVector, record: ExpansionRecord, removal_set: set[int]
) -> SparseVector:
    """Zero the expansion entries named in removal_set; originals are protected."""
    if record.input_id != vec.id:
        raise ValidationError(
            f"record id {record.input_id!r} does not match vector id {vec.id!r}"
        )
    doomed = removal_set & record.t_exp
    if not doomed:
        return vec
    return SparseVector(
        vec.id, {t: w for t, w in vec.weights.items() if t not in doomed}
    )


def run_ablation(
    queries: list[TokenizedInput],
    query_vectors: list[SparseVector],
    doc_index: ImpactIndex,
    qrels: Qrels,
    table: TokenWackinessTable,
    cfg: AblationConfig,
    vocab_size: int | None = None,
    special_tokens: set[int] | None = None,
) -> AblationReport:
    """Execute the removal protocol and collect per-threshold effectiveness."""
    if len(queries) != len(query_vectors):
        raise ValidationError(
            f"{len(queries)} queries but {len(query_vectors)} vectors"
        )
    records = [
        expansion_set(q, v, special_tokens) for q, v in zip(queries, query_vectors)
    ]
    k_max = max_cutoff(cfg.measures)

    def evaluate(vectors: list[SparseVector]) -> dict[str, float]:
        run = [search(v, doc_index, k_max) for v in vectors]
        results = evaluate_measures(run, qrels, cfg.measures)
        return {measure: result.mean for measure, result in results.items()}

    wacky_order = [t for t, _ in table.ranked_tokens()]

    if cfg.removal_pool == POOL_FULL_VOCABULARY:
        if vocab_size is None:
            raise ValidationError("full-vocabulary pool needs vocab_size")
        pool = np.arange(vocab_size, dtype=np.int64)
    else:
        observed = sorted({t for rec in records for t in rec.t_exp})
        pool = np.asarray(observed, dtype=np.int64)

    # One permutation per repeat; prefixes give nested removal sets across
    # thresholds and full determinism for a fixed (seed, repeats).
    permutations = [
        np.random.default_rng([cfg.seed, r]).permutation(pool)
        for r in range(cfg.repeats)
    ]

    full_scores = evaluate(query_vectors)
    no_expansion_vectors = [
        remove_tokens(v, rec, set(rec.t_exp))
        for v, rec in zip(query_vectors, records)
    ]
    no_expansion_scores = evaluate(no_expansion_vectors)

    results: list[ThresholdResult] = []
    for threshold in cfg.thresholds:
        n_wacky = min(threshold, len(wacky_order))
        n_random = min(threshold, len(pool))
        clamped = threshold > len(wacky_order) or threshold > len(pool)

        wacky_set = set(wacky_order[:n_wacky])
        wacky_scores = evaluate(
            [remove_tokens(v, rec, wacky_set) for v, rec in zip(query_vectors, records)]
        )

        per_repeat: list[dict[str, float]] = []
        for perm in permutations:
            random_set = {int(t) for t in perm[:n_random]}
            per_repeat.append(
                evaluate(
                    [
                        remove_tokens(v, rec, random_set)
                        for v, rec in zip(query_vectors, records)
                    ]
                )
            )
        random_mean: dict[str, float] = {}
        random_std: dict[str, float] = {}
        for measure in wacky_scores:
            values = [scores[measure] for scores in per_repeat]
            random_mean[measure] = float(np.mean(values))
            random_std[measure] = (
                float(np.std(values, ddof=1)) if cfg.repeats > 1 else 0.0
            )
        results.append(
            ThresholdResult(threshold, clamped, wacky_scores, random_mean, random_std)
        )

    return AblationReport(results, full_scores, no_expansion_scores)


def significance_band(
    report: AblationReport,
) -> dict[int, dict[str, tuple[float, float, bool]]]:
    """Per threshold and measure: (mean - 2σ, mean + 2σ, wacky outside band)."""
    bands: dict[int, dict[str, tuple[float, float, bool]]] = {}
    for result in report.thresholds:
        per_measure: dict[str, tuple[float, float, bool]] = {}
        for measure, wacky in result.wacky_scores.items():
            mean = result.random_mean[measure]
            spread = 2.0 * result.random_std[measure]
            lo, hi = mean - spread, mean + spread
            if spread == 0.0:
                outside = wacky != mean
            else:
                outside = wacky < lo or wacky > hi
            per_measure[measure] = (lo, hi, outside)
        bands[result.threshold] = per_measure
    return bands


def report_csv_rows(report: AblationReport) -> list[list]:
    """Rows for `threshold,measure,wacky_score,random_mean,random_std,outside_band`."""
    bands = significance_band(report)
    rows = []
    for result in report.thresholds:
        for measure in result.wacky_scores:
            _, _, outside = bands[result.threshold][measure]
            rows.append(
                [
                    result.threshold,
                    measure,
                    result.wacky_scores[measure],
                    result.random_mean[measure],
                    result.random_std[measure],
                    str(outside).lower(),
                ]
            )
    return rows


def endpoints_csv_rows(report: AblationReport) -> list[list]:
    """Rows for `condition,measure,score`."""
    rows = []
    for condition, scores in (("full", report.full), ("no_expansion", report.no_expansion)):
        for measure, score in scores.items():
            rows.append([condition, measure, score])
    return rows
