"""Core domain types shared by every stage of the toolkit.

All structures are plain frozen-ish containers: once constructed and
validated they are never mutated, so they can be read from any number of
worker threads without locking.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ValidationError(ValueError):
    """An input violated a structural invariant (never a partial load)."""


class ParseError(ValueError):
    """A file could not be parsed; message carries the offending location."""


@dataclass
class Vocabulary:
    """Dense token-id space: id i maps to the i-th token string.

    Token ids must be dense 0..size-1.  Token strings need not be unique;
    real tokenizers emit duplicate surface forms.
    """

    tokens: list[str]

    def __post_init__(self) -> None:
        if len(self.tokens) < 1:
            raise ValidationError("vocabulary must contain at least one token")

    @property
    def size(self) -> int:
        return len(self.tokens)

    def token_string(self, token_id: int) -> str:
        return self.tokens[token_id]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class TokenizedInput:
    """A query or document as a sequence of vocabulary token ids."""

    id: str
    tokens: list[int]
    raw_text: str | None = None

    @property
    def is_empty(self) -> bool:
        """Degenerate input (e.g. whitespace-only text); accepted, flagged."""
        return len(self.tokens) == 0

    def distinct_tokens(self) -> set[int]:
        return set(self.tokens)

    def validate_against(self, vocab_size: int) -> None:
        for t in self.tokens:
            if not 0 <= t < vocab_size:
                raise ValidationError(
                    f"input {self.id!r}: token {t} out of range for vocabulary "
                    f"of size {vocab_size}"
                )


@dataclass
class SparseVector:
    """Sparse vocabulary-space vector; absent token ids carry weight 0.

    Stored weights are strictly positive: zero entries are dropped at
    construction/load time and negatives are invalid for activated vectors.
    """

    id: str
    weights: dict[int, float]

    def support(self) -> set[int]:
        return set(self.weights)

    def sorted_items(self) -> list[tuple[int, float]]:
        """Entries in ascending token-id order (the mandated summation order)."""
        return sorted(self.weights.items())

    def validate_against(self, vocab_size: int) -> None:
        for t, w in self.weights.items():
            if not 0 <= t < vocab_size:
                raise ValidationError(
                    f"vector {self.id!r}: token {t} out of range for vocabulary "
                    f"of size {vocab_size}"
                )
            if w <= 0:
                raise ValidationError(
                    f"vector {self.id!r}: stored weight for token {t} must be "
                    f"strictly positive, got {w}"
                )


@dataclass
class PerTokenMatrix:
    """Per-position sparse rows before pooling; may hold raw (signed) logits.

    Rows are keyed by input position and must be strictly increasing in
    position.  ``cls_position``, when set, must match one of the rows.
    """

    id: str
    rows: list[tuple[int, dict[int, float]]]
    cls_position: int | None = None

    def __post_init__(self) -> None:
        positions = [pos for pos, _ in self.rows]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValidationError(
                f"matrix {self.id!r}: row positions must be strictly increasing"
            )
        if self.cls_position is not None and self.cls_position not in positions:
            raise ValidationError(
                f"matrix {self.id!r}: cls position {self.cls_position} has no row"
            )


@dataclass
class Qrels:
    """Graded relevance judgments keyed by (query_id, doc_id)."""

    judgments: dict[tuple[str, str], int]

    def __post_init__(self) -> None:
        for (qid, did), grade in self.judgments.items():
            if grade < 0:
                raise ValidationError(
                    f"qrels: grade for ({qid}, {did}) must be non-negative, "
                    f"got {grade}"
                )

    def grades_for(self, query_id: str) -> dict[str, int]:
        return {
            did: grade
            for (qid, did), grade in self.judgments.items()
            if qid == query_id
        }

    def query_ids(self) -> set[str]:
        return {qid for qid, _ in self.judgments}


@dataclass
class Ranking:
    """Retrieval result for one query: (doc_id, score) in rank order.

    Scores are non-increasing; equal scores are ordered by ascending doc_id;
    doc_ids are unique.
    """

    query_id: str
    entries: list[tuple[str, float]] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        prev: tuple[str, float] | None = None
        for did, score in self.entries:
            if did in seen:
                raise ValidationError(
                    f"ranking {self.query_id!r}: duplicate doc id {did!r}"
                )
            seen.add(did)
            if prev is not None:
                prev_id, prev_score = prev
                if score > prev_score:
                    raise ValidationError(
                        f"ranking {self.query_id!r}: scores must be non-increasing"
                    )
                if score == prev_score and did < prev_id:
                    raise ValidationError(
                        f"ranking {self.query_id!r}: ties must be ordered by "
                        f"ascending doc id"
                    )
            prev = (did, score)

    def doc_ids(self) -> list[str]:
        return [did for did, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def rank_entries(scores: dict[str, float]) -> list[tuple[str, float]]:
    """Order (doc_id, score) pairs by descending score, ties by ascending id."""
    return sorted(scores.items(), key=lambda e: (-e[1], e[0]))
