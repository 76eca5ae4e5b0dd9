"""Expansion-token wackiness: expansion sets, lexical importance, scoring.

For every input we take the tokens the model activated beyond the input's
own tokens, retrieve the input's top-k neighbors with the model's own
ranking function, and measure each expansion token's TF-IDF importance
inside that retrieved set.  Per-token importances are averaged over all
inputs where the token expands, min-max normalized, and inverted: tokens
whose expansions never matter lexically score near 1 (wacky), tokens that
consistently land in retrieved text score near 0.

Documents are analyzed with the identical code path: a document input is
simply issued as a query against the collection.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field

from .impact import ImpactIndex, search
from .io import fmt_float
from .lexical import LexicalIndex
from .types import Ranking, SparseVector, TokenizedInput, ValidationError, Vocabulary

log = logging.getLogger("wackymeter.wackiness")

DEFAULT_TOP_K = 10


@dataclass
class ExpansionRecord:
    """Original, activated, and expansion token sets for one input."""

    input_id: str
    t_orig: set[int]
    t_model: set[int]
    t_exp: set[int]


@dataclass
class ImportanceSample:
    """One lexical-importance observation: token t expanded by input x."""

    token: int
    input_id: str
    value: float


@dataclass
class TokenScore:
    occurrences: int
    mean_importance: float
    wackiness: float


@dataclass
class TokenWackinessTable:
    """Per-token averaged importance and normalized wackiness over a run.

    ``samples`` retains the raw per-input observations so downstream
    comparisons can bootstrap over inputs; ``input_ids`` lists every
    evaluated input, including those that contributed no samples.
    """

    rows: dict[int, TokenScore]
    normalization: tuple[float, float]
    samples: list[ImportanceSample] = field(default_factory=list)
    input_ids: list[str] = field(default_factory=list)

    def ranked_tokens(self) -> list[tuple[int, float]]:
        """(token_id, wackiness) by descending wackiness, ties by ascending id."""
        return sorted(
            ((t, row.wackiness) for t, row in self.rows.items()),
            key=lambda e: (-e[1], e[0]),
        )


def expansion_set(
    inp: TokenizedInput, vec: SparseVector, special_tokens: set[int] | None = None
) -> ExpansionRecord:
    """Split a vector's support into original vs expansion tokens.

    Tokens on the special-token exclusion list (tokenizer artifacts such as
    [CLS]/[SEP]) are removed from both sides, so they are neither original
    evidence nor counted as expansions.
    """
    if vec.id != inp.id:
        raise ValidationError(
            f"vector id {vec.id!r} does not match input id {inp.id!r}"
        )
    special = special_tokens or set()
    t_orig = inp.distinct_tokens() - special
    t_model = vec.support() - special
    return ExpansionRecord(inp.id, t_orig, t_model, t_model - t_orig)


def lexical_importance(
    token_id: int, ranked_docs: Ranking, index: LexicalIndex
) -> float:
    """TF-IDF importance of a token within a retrieved document set.

    Total term frequency across the retrieved documents, normalized by their
    total length, times ln(N / df) over the background collection.  Zero
    total frequency short-circuits to 0 before the IDF is ever evaluated,
    which also covers df = 0.
    """
    if len(ranked_docs) == 0:
        raise ValidationError("lexical importance needs a non-empty ranking")
    total_count = 0
    total_len = 0
    for doc_id, _ in ranked_docs.entries:
        total_count += index.doc_tf.get(doc_id, {}).get(token_id, 0)
        total_len += index.stats.doc_len.get(doc_id, 0)
    if total_count == 0 or total_len == 0:
        return 0.0
    df = index.stats.doc_freq[token_id]  # total_count > 0 implies df >= 1
    return (total_count / total_len) * math.log(index.stats.doc_count / df)


def wackiness_scores(
    inputs: list[TokenizedInput],
    vectors: list[SparseVector],
    impact_index: ImpactIndex,
    lexical_index: LexicalIndex,
    k: int = DEFAULT_TOP_K,
    special_tokens: set[int] | None = None,
    exclude_self: bool = False,
) -> TokenWackinessTable:
    """Run the full scoring pipeline over aligned (input, vector) pairs.

    ``exclude_self`` drops the input's own id from its retrieved set, for
    document-side analyses that want neighbors only; by default an input may
    retrieve itself.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if len(inputs) != len(vectors):
        raise ValidationError(
            f"{len(inputs)} inputs but {len(vectors)} vectors; ids must align"
        )

    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    samples: list[ImportanceSample] = []
    input_ids: list[str] = []

    for inp, vec in zip(inputs, vectors):
        record = expansion_set(inp, vec, special_tokens)
        input_ids.append(inp.id)

        ranking = search(vec, impact_index, k + 1 if exclude_self else k)
        if exclude_self:
            entries = [(d, s) for d, s in ranking.entries if d != inp.id][:k]
            ranking = Ranking(ranking.query_id, entries)
        if len(ranking) == 0:
            log.info("input %r retrieved nothing; contributes no samples", inp.id)
            continue

        for token_id in sorted(record.t_exp):
            value = lexical_importance(token_id, ranking, lexical_index)
            samples.append(ImportanceSample(token_id, inp.id, value))
            sums[token_id] = sums.get(token_id, 0.0) + value
            counts[token_id] = counts.get(token_id, 0) + 1

    return _finalize(sums, counts, samples, input_ids)


def _finalize(
    sums: dict[int, float],
    counts: dict[int, int],
    samples: list[ImportanceSample],
    input_ids: list[str],
) -> TokenWackinessTable:
    means = {t: sums[t] / counts[t] for t in sums}
    if not means:
        return TokenWackinessTable({}, (0.0, 0.0), samples, input_ids)
    low = min(means.values())
    high = max(means.values())
    rows: dict[int, TokenScore] = {}
    for token_id in sorted(means):
        mean = means[token_id]
        if high > low:
            wacky = 1.0 - (mean - low) / (high - low)
        else:
            # No variation in importance: no evidence of wackiness.
            wacky = 0.0
        rows[token_id] = TokenScore(counts[token_id], mean, wacky)
    return TokenWackinessTable(rows, (low, high), samples, input_ids)


def table_from_samples(
    samples_by_input: dict[str, list[tuple[int, float]]],
    input_ids: list[str],
) -> TokenWackinessTable:
    """Rebuild a table from per-input samples, e.g. for a bootstrap resample.

    ``input_ids`` may repeat; each occurrence contributes its samples again.
    """
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for input_id in input_ids:
        for token_id, value in samples_by_input.get(input_id, []):
            sums[token_id] = sums.get(token_id, 0.0) + value
            counts[token_id] = counts.get(token_id, 0) + 1
    return _finalize(sums, counts, [], list(input_ids))


def top_wacky_report(
    table: TokenWackinessTable, vocab: Vocabulary, n: int
) -> list[tuple[str, float]]:
    """The n wackiest tokens as (token_string, wackiness)."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return [
        (vocab.token_string(t), w) for t, w in table.ranked_tokens()[:n]
    ]


TABLE_FORMAT = "wackymeter-wackiness-table/1"


def save_table_json(table: TokenWackinessTable, path) -> None:
    """Full machine-readable table, including samples, for downstream comparison."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write('{"format":%s,' % json.dumps(TABLE_FORMAT))
        fh.write(
            '"normalization":[%s,%s],'
            % (fmt_float(table.normalization[0]), fmt_float(table.normalization[1]))
        )
        fh.write('"input_ids":%s,' % json.dumps(table.input_ids, ensure_ascii=False))
        rows = ",".join(
            '"%d":[%d,%s,%s]'
            % (t, row.occurrences, fmt_float(row.mean_importance), fmt_float(row.wackiness))
            for t, row in sorted(table.rows.items())
        )
        fh.write('"rows":{%s},' % rows)
        samples = ",".join(
            "[%d,%s,%s]" % (s.token, json.dumps(s.input_id, ensure_ascii=False), fmt_float(s.value))
            for s in table.samples
        )
        fh.write('"samples":[%s]}\n' % samples)


def load_table_json(path) -> TokenWackinessTable:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != TABLE_FORMAT:
        raise ValidationError(f"{path}: unsupported table format {payload.get('format')!r}")
    rows = {
        int(t): TokenScore(int(occ), float(mean), float(wacky))
        for t, (occ, mean, wacky) in payload["rows"].items()
    }
    samples = [
        ImportanceSample(int(t), str(input_id), float(value))
        for t, input_id, value in payload["samples"]
    ]
    low, high = payload["normalization"]
    return TokenWackinessTable(
        rows, (float(low), float(high)), samples, list(payload["input_ids"])
    )


def table_csv_rows(table: TokenWackinessTable, vocab: Vocabulary) -> list[list]:
    """Rows for `token_id,token_string,occurrences,mean_importance,wackiness`."""
    rows = []
    for token_id, wacky in table.ranked_tokens():
        score = table.rows[token_id]
        rows.append(
            [
                token_id,
                vocab.token_string(token_id),
                score.occurrences,
                score.mean_importance,
                wacky,
            ]
        )
    return rows
