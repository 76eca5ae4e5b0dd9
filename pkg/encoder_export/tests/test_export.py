"""Adapter behaviour: vocab dump, encoding modes, truncation, determinism."""

from __future__ import annotations

import json

import pytest

from encoder_export.adapter import (
    ExportConfig,
    encode,
    load_checkpoint,
    read_texts_tsv,
    vocabulary_tokens,
)
from encoder_export.cli import main as cli_main


class TestVocab:
    def test_dense_and_complete(self, checkpoint):
        tokenizer, _ = load_checkpoint(ExportConfig(checkpoint))
        tokens = vocabulary_tokens(tokenizer)
        assert len(tokens) == tokenizer.vocab_size
        assert all(isinstance(t, str) for t in tokens)
        assert tokens[tokenizer.cls_token_id] == "[CLS]"

    def test_cli_export_vocab(self, checkpoint, tmp_path):
        assert cli_main(
            ["export-vocab", "--checkpoint", checkpoint, "--out", str(tmp_path)]
        ) == 0
        lines = (tmp_path / "vocab.tsv").read_text(encoding="utf-8").splitlines()
        tokenizer, _ = load_checkpoint(ExportConfig(checkpoint))
        assert len(lines) == tokenizer.vocab_size
        for expected_id, line in enumerate(lines):
            token_id, _, _token = line.partition("\t")
            assert int(token_id) == expected_id


class TestEncode:
    def test_per_token_rows_are_activated_and_in_range(self, checkpoint):
        cfg = ExportConfig(checkpoint, emit="per_token", batch_size=3)
        corpus, vectors = encode(
            [("a", "liver pain"), ("b", "the doctor"), ("c", "blood test")], cfg
        )
        tokenizer, _ = load_checkpoint(cfg)
        assert [r["id"] for r in corpus] == ["a", "b", "c"]
        for vec_id, rows, cls_pos in vectors:
            assert cls_pos == 0  # BERT-style: [CLS] leads the sequence
            positions = [pos for pos, _ in rows]
            assert positions == sorted(positions)
            for _, row in rows:
                for token_id, weight in row.items():
                    assert 0 <= token_id < tokenizer.vocab_size
                    assert weight > 0

    def test_corpus_tokens_match_tokenizer(self, checkpoint):
        cfg = ExportConfig(checkpoint)
        tokenizer, _ = load_checkpoint(cfg)
        corpus, _ = encode([("a", "symptoms of liver distress")], cfg)
        expected = tokenizer("symptoms of liver distress")["input_ids"]
        assert corpus[0]["tokens"] == expected

    def test_empty_string_input(self, checkpoint):
        cfg = ExportConfig(checkpoint, emit="per_token")
        corpus, vectors = encode([("empty", "")], cfg)
        tokenizer, _ = load_checkpoint(cfg)
        assert corpus[0]["tokens"] == [tokenizer.cls_token_id, tokenizer.sep_token_id]
        _, rows, _ = vectors[0]
        assert len(rows) == 2  # special tokens only

    def test_truncation_flagged(self, checkpoint):
        cfg = ExportConfig(checkpoint, max_length=4)
        corpus, _ = encode(
            [("long", "the doctor treats liver pain and heart disease")], cfg
        )
        assert corpus[0]["truncated"] is True
        assert len(corpus[0]["tokens"]) == 4

    def test_pooled_modes(self, checkpoint):
        for agg in ("max", "sum", "cls"):
            cfg = ExportConfig(checkpoint, emit="pooled", aggregation=agg)
            _, vectors = encode([("a", "liver pain")], cfg)
            _, weights = vectors[0]
            assert weights and all(w > 0 for w in weights.values())

    def test_deterministic_across_runs(self, checkpoint, tmp_path):
        src = tmp_path / "texts.tsv"
        src.write_text("a\tliver pain\nb\tthe doctor\n", encoding="utf-8")
        outs = []
        for name in ("one", "two"):
            out = tmp_path / name
            assert cli_main(
                ["encode", "--checkpoint", checkpoint, "--input", str(src),
                 "--mode", "per_token", "--out", str(out)]
            ) == 0
            outs.append(
                {p.name: p.read_bytes() for p in sorted(out.iterdir())}
            )
        assert outs[0] == outs[1]

    def test_batch_size_does_not_change_support(self, checkpoint):
        """Padding length varies with batching; supports must not."""
        texts = [("a", "liver pain"), ("b", "the doctor treats heart disease"),
                 ("c", "blood"), ("d", "symptoms of stress")]
        supports = []
        for batch_size in (1, 4):
            cfg = ExportConfig(checkpoint, emit="pooled", batch_size=batch_size)
            _, vectors = encode(texts, cfg)
            supports.append([set(w) for _, w in vectors])
        assert supports[0] == supports[1]


class TestTextsTsv:
    def test_reads_ids_and_text(self, tmp_path):
        path = tmp_path / "texts.tsv"
        path.write_text("x\thello there\ny\ttab\tinside\n", encoding="utf-8")
        assert read_texts_tsv(path) == [("x", "hello there"), ("y", "tab\tinside")]

    def test_rejects_missing_tab(self, tmp_path):
        path = tmp_path / "texts.tsv"
        path.write_text("justtext\n", encoding="utf-8")
        with pytest.raises(ValueError):
            read_texts_tsv(path)


class TestHeaders:
    def test_vector_file_headers(self, checkpoint, tmp_path):
        src = tmp_path / "texts.tsv"
        src.write_text("a\tliver pain\n", encoding="utf-8")
        for mode, expected in (
            ("per_token", {"format": "per_token", "activated": True}),
            ("pooled", {"format": "pooled", "activated": True, "agg": "max"}),
        ):
            out = tmp_path / mode
            assert cli_main(
                ["encode", "--checkpoint", checkpoint, "--input", str(src),
                 "--mode", mode, "--out", str(out)]
            ) == 0
            header = json.loads(
                (out / "vectors.jsonl").read_text(encoding="utf-8").splitlines()[0]
            )
            assert header == expected
