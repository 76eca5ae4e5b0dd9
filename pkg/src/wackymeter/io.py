"""Interchange-file parsing, validation and canonical serialization.

Canonical form, used by every writer in the package:

* floats rendered as the shortest decimal that round-trips (``repr``),
* JSON objects with token-id keys emitted in ascending numeric order,
* LF line endings, UTF-8, no trailing whitespace.

This makes ``serialize(load(x))`` byte-stable for canonical files, which the
reproducibility checks rely on.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

from .types import (
    ParseError,
    PerTokenMatrix,
    Qrels,
    Ranking,
    SparseVector,
    TokenizedInput,
    ValidationError,
)

log = logging.getLogger("wackymeter.io")


def fmt_float(x: float) -> str:
    """Shortest round-trip decimal rendering of a float."""
    return repr(float(x))


def _require_finite(value: float, where: str) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise ValidationError(f"{where}: non-finite value {value!r}")
    return v


# ---------------------------------------------------------------------------
# Vocabulary: TSV `token_id<TAB>token_string`
# ---------------------------------------------------------------------------


def load_vocabulary(path: str | Path):
    """Read a vocabulary TSV and validate that token ids are dense 0..|V|-1."""
    from .types import Vocabulary

    tokens: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line == "":
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(
                    f"{path}:{lineno}: expected `token_id<TAB>token_string`, "
                    f"got {line!r}"
                )
            try:
                token_id = int(parts[0])
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: token id {parts[0]!r} is not an integer"
                ) from None
            if token_id != len(tokens):
                raise ValidationError(
                    f"{path}:{lineno}: token ids must be dense and ascending; "
                    f"expected {len(tokens)}, got {token_id}"
                )
            tokens.append(parts[1])
    if not tokens:
        raise ValidationError(f"{path}: vocabulary file is empty")
    return Vocabulary(tokens)


def save_vocabulary(vocab, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for token_id, token in enumerate(vocab.tokens):
            fh.write(f"{token_id}\t{token}\n")


# ---------------------------------------------------------------------------
# Corpus / queries: JSONL `{"id": str, "tokens": [int,...], "text": str?}`
# ---------------------------------------------------------------------------


def load_corpus(path: str | Path, vocab_size: int | None = None) -> list[TokenizedInput]:
    """Read tokenized inputs in file order, validating ids against the vocabulary."""
    inputs: list[TokenizedInput] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc})") from None
            try:
                rec_id = record["id"]
                tokens = record["tokens"]
            except (KeyError, TypeError):
                raise ParseError(
                    f"{path}:{lineno}: record must carry `id` and `tokens`"
                ) from None
            if not isinstance(tokens, list) or not all(
                isinstance(t, int) for t in tokens
            ):
                raise ParseError(
                    f"{path}:{lineno}: `tokens` must be a list of integers"
                )
            inp = TokenizedInput(str(rec_id), list(tokens), record.get("text"))
            if vocab_size is not None:
                inp.validate_against(vocab_size)
            if inp.is_empty:
                log.debug("input %r has an empty token sequence", inp.id)
            inputs.append(inp)
    return inputs


def save_corpus(inputs: list[TokenizedInput], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inp in inputs:
            record: dict = {"id": inp.id, "tokens": inp.tokens}
            if inp.raw_text is not None:
                record["text"] = inp.raw_text
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Vectors: JSONL with a first-line header object
# ---------------------------------------------------------------------------


@dataclass
class VectorFile:
    """A parsed vector interchange file."""

    format: str  # "pooled" | "per_token"
    activated: bool
    pooled: list[SparseVector] | None = None
    per_token: list[PerTokenMatrix] | None = None

    @property
    def vectors(self):
        return self.pooled if self.format == "pooled" else self.per_token


def _parse_weight_map(raw: dict, where: str, activated: bool) -> dict[int, float]:
    weights: dict[int, float] = {}
    for key, value in raw.items():
        try:
            token_id = int(key)
        except ValueError:
            raise ParseError(f"{where}: token id {key!r} is not an integer") from None
        v = _require_finite(value, where)
        if activated:
            if v < 0:
                raise ValidationError(
                    f"{where}: activated weight for token {token_id} is negative "
                    f"({v})"
                )
            if v == 0:
                continue  # zero entries are not part of the support
        weights[token_id] = v
    return weights


def load_vectors(path: str | Path, vocab_size: int | None = None) -> VectorFile:
    """Read a vector file; the header decides pooled vs per-token, raw vs activated."""
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line.strip():
            raise ParseError(f"{path}:1: missing header line")
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:1: invalid header JSON ({exc})") from None
        fmt = header.get("format")
        activated = header.get("activated")
        if fmt not in ("pooled", "per_token") or not isinstance(activated, bool):
            raise ParseError(
                f'{path}:1: header must be {{"format":"pooled"|"per_token",'
                f'"activated":true|false}}, got {header_line.strip()!r}'
            )
        if fmt == "pooled" and not activated:
            raise ValidationError(
                f"{path}: pooled vectors must be activated (raw pooled weights "
                f"have no defined sign)"
            )

        pooled: list[SparseVector] = []
        per_token: list[PerTokenMatrix] = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON ({exc})") from None
            rec_id = record.get("id")
            if rec_id is None:
                raise ParseError(f"{path}:{lineno}: record has no `id`")
            where = f"{path}:{lineno} (id {rec_id!r})"
            if fmt == "pooled":
                weights = _parse_weight_map(record.get("weights", {}), where, True)
                vec = SparseVector(str(rec_id), weights)
                if vocab_size is not None:
                    vec.validate_against(vocab_size)
                pooled.append(vec)
            else:
                rows: list[tuple[int, dict[int, float]]] = []
                for row in record.get("rows", []):
                    pos = row.get("pos")
                    if not isinstance(pos, int):
                        raise ParseError(f"{where}: row `pos` must be an integer")
                    rows.append(
                        (pos, _parse_weight_map(row.get("weights", {}), where, activated))
                    )
                matrix = PerTokenMatrix(str(rec_id), rows, record.get("cls_pos"))
                if vocab_size is not None:
                    for _, row_weights in matrix.rows:
                        for t in row_weights:
                            if not 0 <= t < vocab_size:
                                raise ValidationError(
                                    f"{where}: token {t} out of range for "
                                    f"vocabulary of size {vocab_size}"
                                )
                per_token.append(matrix)

    if fmt == "pooled":
        return VectorFile(fmt, activated, pooled=pooled)
    return VectorFile(fmt, activated, per_token=per_token)


def _weights_json(weights: dict[int, float]) -> str:
    items = ",".join(
        f'"{t}":{fmt_float(w)}' for t, w in sorted(weights.items())
    )
    return "{" + items + "}"


def save_pooled_vectors(
    vectors: list[SparseVector],
    path: str | Path,
    activated: bool = True,
    aggregation: str | None = None,
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        agg = "" if aggregation is None else ',"agg":%s' % json.dumps(aggregation)
        fh.write(
            '{"format":"pooled","activated":%s%s}\n'
            % ("true" if activated else "false", agg)
        )
        for vec in vectors:
            fh.write(
                '{"id":%s,"weights":%s}\n'
                % (json.dumps(vec.id, ensure_ascii=False), _weights_json(vec.weights))
            )


def save_per_token_vectors(
    matrices: list[PerTokenMatrix], path: str | Path, activated: bool
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            '{"format":"per_token","activated":%s}\n'
            % ("true" if activated else "false")
        )
        for m in matrices:
            rows = ",".join(
                '{"pos":%d,"weights":%s}' % (pos, _weights_json(weights))
                for pos, weights in m.rows
            )
            cls = "" if m.cls_position is None else ',"cls_pos":%d' % m.cls_position
            fh.write(
                '{"id":%s,"rows":[%s]%s}\n'
                % (json.dumps(m.id, ensure_ascii=False), rows, cls)
            )


# ---------------------------------------------------------------------------
# Qrels: TREC text format `qid 0 docid grade`
# ---------------------------------------------------------------------------


def load_qrels(path: str | Path) -> Qrels:
    judgments: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ParseError(
                    f"{path}:{lineno}: expected `qid 0 docid grade`, got {line!r}"
                )
            qid, _, did, grade_str = parts
            try:
                grade = int(grade_str)
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: grade {grade_str!r} is not an integer"
                ) from None
            if grade < 0:
                raise ValidationError(f"{path}:{lineno}: negative grade {grade}")
            judgments[(qid, did)] = grade
    return Qrels(judgments)


def save_qrels(qrels: Qrels, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for (qid, did), grade in sorted(qrels.judgments.items()):
            fh.write(f"{qid} 0 {did} {grade}\n")


# ---------------------------------------------------------------------------
# Run files: TREC format `qid Q0 docid rank score tag`
# ---------------------------------------------------------------------------


def save_run(rankings: list[Ranking], path: str | Path, tag: str = "wackymeter") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ranking in rankings:
            for rank, (did, score) in enumerate(ranking.entries, start=1):
                fh.write(
                    f"{ranking.query_id} Q0 {did} {rank} {fmt_float(score)} {tag}\n"
                )


def load_run(path: str | Path) -> list[Ranking]:
    """Read a TREC run file; entries are reordered by their rank column."""
    per_query: dict[str, list[tuple[int, str, float]]] = {}
    order: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise ParseError(
                    f"{path}:{lineno}: expected `qid Q0 docid rank score tag`, "
                    f"got {line!r}"
                )
            qid, _, did, rank_str, score_str, _ = parts
            try:
                rank = int(rank_str)
                score = float(score_str)
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}: malformed rank or score"
                ) from None
            if qid not in per_query:
                per_query[qid] = []
                order.append(qid)
            per_query[qid].append((rank, did, score))

    rankings = []
    for qid in order:
        entries = [(did, score) for _, did, score in sorted(per_query[qid])]
        rankings.append(Ranking(qid, entries))
    return rankings


# ---------------------------------------------------------------------------
# Small CSV helper shared by the reporting writers
# ---------------------------------------------------------------------------


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    """Write a canonical CSV: header row, LF endings, repr-formatted floats."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            rendered = [
                fmt_float(cell) if isinstance(cell, float) else str(cell)
                for cell in row
            ]
            fh.write(",".join(rendered) + "\n")
