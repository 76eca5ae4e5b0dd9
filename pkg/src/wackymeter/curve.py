"""Normalized wackiness curves and W-AUC for cross-model comparison.

Tokens are ranked by descending wackiness and partitioned into B
equal-fraction bins; the curve is the sequence of bin means and W-AUC its
arithmetic mean (the unit-width Riemann area under the step curve, always
in [0, 1]).  Binning fractions are taken over the scored tokens, not the
raw vocabulary: tokens that never appear as expansions have no defined
score.  ``pad_to_vocab`` switches to a strict mode that assigns unscored
vocabulary ids a wackiness of 1.0 for sensitivity analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as scipy_stats

from .types import ValidationError
from .wackiness import TokenWackinessTable, table_from_samples

DEFAULT_BINS = 100
SIGNIFICANCE_ALPHA = 0.05


@dataclass
class WackinessCurve:
    bin_count: int
    bin_means: list[float]
    scored_token_count: int


@dataclass
class ModelComparison:
    """Bootstrap W-AUC summary per model plus significance grouping."""

    names: list[str]
    auc_mean: dict[str, float]
    auc_two_sigma: dict[str, float]
    groups: dict[str, str]
    auc_runs: dict[str, list[float]]


def build_curve(
    table: TokenWackinessTable, bins: int = DEFAULT_BINS, pad_to_vocab: int | None = None
) -> WackinessCurve:
    """Bin the ranked wackiness scores into `bins` equal-fraction bins."""
    if bins < 1:
        raise ValidationError(f"bin count must be >= 1, got {bins}")
    ranked = table.ranked_tokens()
    if not ranked:
        raise ValidationError("cannot build a curve from a table with no scored tokens")

    if pad_to_vocab is not None:
        if pad_to_vocab < len(ranked):
            raise ValidationError(
                f"pad_to_vocab ({pad_to_vocab}) smaller than scored token count "
                f"({len(ranked)})"
            )
        scored = set(table.rows)
        padded = [(t, 1.0) for t in range(pad_to_vocab) if t not in scored]
        ranked = sorted(ranked + padded, key=lambda e: (-e[1], e[0]))

    scores = [w for _, w in ranked]
    m = len(scores)
    means: list[float] = []
    for i in range(bins):
        lo = i * m // bins
        hi = (i + 1) * m // bins
        if hi <= lo:
            means.append(0.0)
        else:
            means.append(sum(scores[lo:hi]) / (hi - lo))
    return WackinessCurve(bins, means, m)


def w_auc(curve: WackinessCurve) -> float:
    """Normalized area under the step curve: the mean of the bin means."""
    return sum(curve.bin_means) / curve.bin_count


def curve_csv_rows(curve: WackinessCurve) -> list[list]:
    """Rows for `bin_index,bin_mean`."""
    return [[i, mean] for i, mean in enumerate(curve.bin_means)]


def _bootstrap_aucs(
    tables: list[tuple[str, TokenWackinessTable]],
    bins: int,
    repeats: int,
    seed: int,
) -> dict[str, list[float]]:
    shared_ids = sorted(tables[0][1].input_ids)
    by_model: dict[str, dict[str, list[tuple[int, float]]]] = {}
    for name, table in tables:
        grouped: dict[str, list[tuple[int, float]]] = {}
        for sample in table.samples:
            grouped.setdefault(sample.input_id, []).append(
                (sample.token, sample.value)
            )
        by_model[name] = grouped

    runs: dict[str, list[float]] = {name: [] for name, _ in tables}
    n = len(shared_ids)
    for r in range(repeats):
        rng = np.random.default_rng([seed, r])
        picks = rng.integers(0, n, size=n)
        resample = [shared_ids[i] for i in picks]
        for name, _ in tables:
            resampled_table = table_from_samples(by_model[name], resample)
            if not resampled_table.rows:
                runs[name].append(0.0)
                continue
            runs[name].append(w_auc(build_curve(resampled_table, bins)))
    return runs


def compare_models(
    tables: list[tuple[str, TokenWackinessTable]],
    bins: int = DEFAULT_BINS,
    repeats: int = 10,
    seed: int = 0,
) -> ModelComparison:
    """Bootstrap W-AUC (mean ± 2σ) per model with paired significance groups.

    Every repeat resamples the shared input set with replacement and
    recomputes each model's table, curve and W-AUC on the same resample, so
    the per-repeat AUC values are paired across models.  Pairwise paired
    t-tests with Bonferroni correction decide which models are statistically
    indistinguishable; indistinguishable models share a group letter.
    """
    if repeats < 1:
        raise ValidationError(f"repeats must be >= 1, got {repeats}")
    if not tables:
        raise ValidationError("compare_models needs at least one table")
    id_sets = [set(table.input_ids) for _, table in tables]
    for (name, _), ids in zip(tables[1:], id_sets[1:]):
        if ids != id_sets[0]:
            raise ValidationError(
                f"model {name!r} was scored on a different input set; paired "
                f"comparison requires shared inputs"
            )

    runs = _bootstrap_aucs(tables, bins, repeats, seed)
    names = [name for name, _ in tables]
    auc_mean = {name: float(np.mean(runs[name])) for name in names}
    auc_two_sigma = {
        name: 2.0 * float(np.std(runs[name], ddof=1)) if repeats > 1 else 0.0
        for name in names
    }

    groups = _significance_groups(names, runs, repeats)
    return ModelComparison(names, auc_mean, auc_two_sigma, groups, runs)


def _significance_groups(
    names: list[str], runs: dict[str, list[float]], repeats: int
) -> dict[str, str]:
    """Union models whose paired AUC runs are not significantly different."""
    parent = {name: name for name in names}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: str, b: str) -> None:
        parent[find(a)] = find(b)

    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1 :]]
    n_pairs = max(len(pairs), 1)
    for a, b in pairs:
        diffs = np.asarray(runs[a]) - np.asarray(runs[b])
        if repeats < 2 or np.allclose(diffs, diffs[0]):
            # Constant differences leave the t statistic undefined; only an
            # exactly-zero difference counts as indistinguishable then.
            not_significant = bool(np.allclose(diffs, 0.0))
        else:
            p_value = float(scipy_stats.ttest_rel(runs[a], runs[b]).pvalue)
            not_significant = min(1.0, p_value * n_pairs) >= SIGNIFICANCE_ALPHA
        if not_significant:
            union(a, b)

    # Letter groups in ascending mean-AUC order, Table-style.
    order = sorted(names, key=lambda name: (float(np.mean(runs[name])), name))
    letters: dict[str, str] = {}
    labels = "abcdefghijklmnopqrstuvwxyz"
    for name in order:
        root = find(name)
        if root not in letters:
            letters[root] = labels[len(letters) % len(labels)]
    return {name: letters[find(name)] for name in names}


def comparison_csv_rows(comparison: ModelComparison) -> list[list]:
    """Rows for `model,w_auc,two_sigma,group`, ascending mean AUC."""
    order = sorted(comparison.names, key=lambda n: (comparison.auc_mean[n], n))
    return [
        [name, comparison.auc_mean[name], comparison.auc_two_sigma[name],
         comparison.groups[name]]
        for name in order
    ]
