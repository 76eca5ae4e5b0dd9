"""Writers for the analysis toolkit's interchange files.

These mirror the consumer's canonical form byte for byte: floats as the
shortest round-tripping decimal, weight keys in ascending numeric order,
LF endings, UTF-8.  The adapter deliberately does not import the consumer;
the file formats are the contract.
"""

from __future__ import annotations

import json
from pathlib import Path


def fmt_float(x: float) -> str:
    return repr(float(x))


def write_vocabulary(tokens: list[str], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for token_id, token in enumerate(tokens):
            fh.write(f"{token_id}\t{token}\n")


def write_corpus(records: list[dict], path: str | Path) -> None:
    """Records: {"id": str, "tokens": [int], "text": str?, "truncated": bool?}."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def _weights_json(weights: dict[int, float]) -> str:
    items = ",".join(f'"{t}":{fmt_float(w)}' for t, w in sorted(weights.items()))
    return "{" + items + "}"


def write_pooled_vectors(
    vectors: list[tuple[str, dict[int, float]]],
    path: str | Path,
    aggregation: str | None = None,
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        agg = "" if aggregation is None else ',"agg":%s' % json.dumps(aggregation)
        fh.write('{"format":"pooled","activated":true%s}\n' % agg)
        for vec_id, weights in vectors:
            fh.write(
                '{"id":%s,"weights":%s}\n'
                % (json.dumps(vec_id, ensure_ascii=False), _weights_json(weights))
            )


def write_per_token_vectors(
    matrices: list[tuple[str, list[tuple[int, dict[int, float]]], int | None]],
    path: str | Path,
) -> None:
    """Matrices: (id, [(position, activated row)], cls position)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write('{"format":"per_token","activated":true}\n')
        for vec_id, rows, cls_pos in matrices:
            rendered = ",".join(
                '{"pos":%d,"weights":%s}' % (pos, _weights_json(weights))
                for pos, weights in rows
            )
            cls = "" if cls_pos is None else ',"cls_pos":%d' % cls_pos
            fh.write(
                '{"id":%s,"rows":[%s]%s}\n'
                % (json.dumps(vec_id, ensure_ascii=False), rendered, cls)
            )
