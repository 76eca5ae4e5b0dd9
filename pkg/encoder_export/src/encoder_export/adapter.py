"""Bridge from pretrained masked-LM sparse encoders to interchange files.

The adapter runs a checkpoint's MLM head over raw texts, applies the
log(1 + ReLU) activation to every token position, and emits either the
per-token rows (with the CLS position marked) or a pooled vector per text.
Activation happens adapter-side, so the emitted files always carry
non-negative weights and the downstream toolkit stays model-agnostic.

Inference is batched, runs under no_grad in eval mode, and output order
follows input order, so repeated runs produce identical files.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from transformers import AutoModelForMaskedLM, AutoTokenizer


@dataclass
class ExportConfig:
    checkpoint: str
    batch_size: int = 8
    max_length: int = 128
    emit: str = "per_token"  # "per_token" | "pooled"
    aggregation: str = "max"  # "max" | "sum" | "cls"
    device: str = "cpu"

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.max_length < 2:
            raise ValueError("max_length must be >= 2")
        if self.emit not in ("per_token", "pooled"):
            raise ValueError(f"unknown emit mode {self.emit!r}")
        if self.aggregation not in ("max", "sum", "cls"):
            raise ValueError(f"unknown aggregation {self.aggregation!r}")


def load_checkpoint(cfg: ExportConfig):
    tokenizer = AutoTokenizer.from_pretrained(cfg.checkpoint)
    model = AutoModelForMaskedLM.from_pretrained(cfg.checkpoint)
    model.to(cfg.device)
    model.eval()
    return tokenizer, model


def vocabulary_tokens(tokenizer) -> list[str]:
    """The tokenizer's vocabulary as a dense id-ordered list."""
    vocab = tokenizer.get_vocab()
    tokens = [None] * len(vocab)
    for token, token_id in vocab.items():
        if not 0 <= token_id < len(vocab):
            raise ValueError(
                f"tokenizer vocabulary is not dense: id {token_id} out of range"
            )
        if tokens[token_id] is not None:
            raise ValueError(f"tokenizer vocabulary reuses id {token_id}")
        tokens[token_id] = token
    return tokens


def _activated_rows(
    logits: torch.Tensor, input_ids: list[int], length: int
) -> list[tuple[int, dict[int, float]]]:
    """Positive entries of log1p(relu(logits)) per non-pad position."""
    activated = torch.log1p(torch.relu(logits[:length]))
    rows = []
    for pos in range(length):
        row = activated[pos]
        support = torch.nonzero(row > 0, as_tuple=False).flatten()
        rows.append(
            (pos, {int(t): float(row[t]) for t in support.tolist()})
        )
    return rows


def _pool(
    rows: list[tuple[int, dict[int, float]]], aggregation: str, cls_pos: int | None
) -> dict[int, float]:
    if aggregation == "cls":
        if cls_pos is None:
            raise ValueError("cls aggregation needs a CLS position in the input")
        for pos, row in rows:
            if pos == cls_pos:
                return dict(row)
        raise ValueError(f"no row at CLS position {cls_pos}")
    combined: dict[int, float] = {}
    for _, row in rows:
        for t, w in row.items():
            if aggregation == "max":
                if w > combined.get(t, 0.0):
                    combined[t] = w
            else:
                combined[t] = combined.get(t, 0.0) + w
    return {t: w for t, w in combined.items() if w != 0.0}


def encode(
    texts: list[tuple[str, str]], cfg: ExportConfig
) -> tuple[list[dict], list]:
    """Encode (id, text) pairs into corpus records and vector records.

    Returns (corpus_records, vector_records); vector records are
    (id, rows, cls_pos) triples in per_token mode and (id, weights) pairs in
    pooled mode, both in input order.
    """
    if not texts:
        raise ValueError("encode needs at least one text")
    tokenizer, model = load_checkpoint(cfg)
    cls_id = tokenizer.cls_token_id

    corpus_records: list[dict] = []
    vector_records: list = []
    for start in range(0, len(texts), cfg.batch_size):
        batch = texts[start : start + cfg.batch_size]
        raw = [text for _, text in batch]
        encoded = tokenizer(
            raw,
            padding=True,
            truncation=True,
            max_length=cfg.max_length,
            return_tensors="pt",
        )
        encoded = {k: v.to(cfg.device) for k, v in encoded.items()}
        with torch.no_grad():
            logits = model(**encoded).logits

        for i, (text_id, text) in enumerate(batch):
            mask = encoded["attention_mask"][i]
            length = int(mask.sum())
            ids = encoded["input_ids"][i][:length].tolist()
            untruncated = len(tokenizer(text, truncation=False)["input_ids"])
            record = {"id": text_id, "tokens": ids, "text": text}
            if untruncated > length:
                record["truncated"] = True
            corpus_records.append(record)

            rows = _activated_rows(logits[i], ids, length)
            cls_pos = ids.index(cls_id) if cls_id in ids else None
            if cfg.emit == "per_token":
                vector_records.append((text_id, rows, cls_pos))
            else:
                vector_records.append((text_id, _pool(rows, cfg.aggregation, cls_pos)))
    return corpus_records, vector_records


def read_texts_tsv(path) -> list[tuple[str, str]]:
    """`id<TAB>text` lines; text may contain further tabs."""
    texts = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected `id<TAB>text`")
            text_id, text = line.split("\t", 1)
            texts.append((text_id, text))
    return texts
