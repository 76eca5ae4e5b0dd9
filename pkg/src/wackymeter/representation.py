"""Sparse-representation math: activation, pooling, and sparsity regularizers.

Everything here is a pure function over sparse maps; natural log throughout.
Per-dimension reductions iterate the union of row supports only, which is
numerically identical to iterating the full vocabulary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .types import PerTokenMatrix, SparseVector, ValidationError


class Aggregation(str, Enum):
    MAX = "max"
    SUM = "sum"
    CLS = "cls"


class RegularizerKind(str, Enum):
    FLOPS = "flops"
    L1 = "l1"


@dataclass
class RegularizerConfig:
    lambda_q: float
    lambda_d: float
    kind: RegularizerKind = RegularizerKind.FLOPS

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lambda_q) and math.isfinite(self.lambda_d)):
            raise ValidationError("regularizer lambdas must be finite")
        if self.lambda_q < 0 or self.lambda_d < 0:
            raise ValidationError("regularizer lambdas must be non-negative")


@dataclass
class Batch:
    """A batch of pooled sparse vectors over a shared vocabulary."""

    vectors: list[SparseVector]

    def __post_init__(self) -> None:
        if len(self.vectors) < 1:
            raise ValidationError("batch must contain at least one vector")

    def __len__(self) -> int:
        return len(self.vectors)


def activate(raw_row: dict[int, float]) -> dict[int, float]:
    """Map each raw value x to ln(1 + max(0, x)), dropping entries that hit 0."""
    out: dict[int, float] = {}
    for token_id, value in raw_row.items():
        if not math.isfinite(value):
            raise ValidationError(
                f"non-finite raw weight {value!r} for token {token_id}"
            )
        if value <= 0:
            continue
        out[token_id] = math.log1p(value)
    return out


def aggregate(matrix: PerTokenMatrix, mode: Aggregation) -> SparseVector:
    """Pool activated per-token rows into one sparse vector.

    MAX takes the per-dimension maximum across rows, SUM the per-dimension
    sum, and CLS returns the row stored at the matrix's cls position.  Rows
    must already be activated (non-negative); zero results are dropped.
    """
    if mode == Aggregation.CLS:
        if matrix.cls_position is None:
            raise ValidationError(
                f"matrix {matrix.id!r}: CLS aggregation needs a cls position"
            )
        for pos, row in matrix.rows:
            if pos == matrix.cls_position:
                weights = {t: w for t, w in row.items() if w != 0}
                _check_non_negative(matrix.id, weights)
                return SparseVector(matrix.id, weights)
        raise ValidationError(
            f"matrix {matrix.id!r}: cls position {matrix.cls_position} has no row"
        )

    combined: dict[int, float] = {}
    for _, row in matrix.rows:
        _check_non_negative(matrix.id, row)
        for token_id, weight in row.items():
            if mode == Aggregation.MAX:
                prev = combined.get(token_id)
                if prev is None or weight > prev:
                    combined[token_id] = weight
            else:
                combined[token_id] = combined.get(token_id, 0.0) + weight
    return SparseVector(matrix.id, {t: w for t, w in combined.items() if w != 0})


def _check_non_negative(matrix_id: str, row: dict[int, float]) -> None:
    for token_id, weight in row.items():
        if weight < 0:
            raise ValidationError(
                f"matrix {matrix_id!r}: aggregation requires activated "
                f"(non-negative) rows, token {token_id} has weight {weight}"
            )


def flops_loss(batch: Batch) -> float:
    """Sum over vocabulary dimensions of the squared per-batch mean weight."""
    n = len(batch)
    sums: dict[int, float] = {}
    for vec in batch.vectors:
        for token_id, weight in vec.weights.items():
            sums[token_id] = sums.get(token_id, 0.0) + weight
    total = 0.0
    for token_id in sorted(sums):
        mean = sums[token_id] / n
        total += mean * mean
    return total


def l1_loss(batch: Batch) -> float:
    """Mean over the batch of each vector's total absolute weight."""
    n = len(batch)
    total = 0.0
    for vec in batch.vectors:
        for _, weight in vec.sorted_items():
            total += abs(weight)
    return total / n


def combined_regularizer(
    query_batch: Batch, doc_batch: Batch, cfg: RegularizerConfig
) -> float:
    """Weighted sum of the query-side and document-side regularizer values."""
    loss = flops_loss if cfg.kind == RegularizerKind.FLOPS else l1_loss
    return cfg.lambda_q * loss(query_batch) + cfg.lambda_d * loss(doc_batch)


def pool_file(matrices: list[PerTokenMatrix], mode: Aggregation, activated: bool) -> list[SparseVector]:
    """Per-token matrices -> pooled vectors, activating raw rows first."""
    pooled = []
    for matrix in matrices:
        if not activated:
            matrix = PerTokenMatrix(
                matrix.id,
                [(pos, activate(row)) for pos, row in matrix.rows],
                matrix.cls_position,
            )
        pooled.append(aggregate(matrix, mode))
    return pooled
