"""Command line: dump a checkpoint's vocabulary, encode texts to vectors."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .adapter import (
    ExportConfig,
    encode,
    load_checkpoint,
    read_texts_tsv,
    vocabulary_tokens,
)
from .formats import (
    write_corpus,
    write_per_token_vectors,
    write_pooled_vectors,
    write_vocabulary,
)


def cmd_export_vocab(args) -> int:
    cfg = ExportConfig(checkpoint=args.checkpoint)
    tokenizer, _ = load_checkpoint(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tokens = vocabulary_tokens(tokenizer)
    write_vocabulary(tokens, out / "vocab.tsv")
    print(f"wrote {len(tokens)} tokens to {out / 'vocab.tsv'}")
    return 0


def cmd_encode(args) -> int:
    cfg = ExportConfig(
        checkpoint=args.checkpoint,
        batch_size=args.batch_size,
        max_length=args.max_length,
        emit=args.mode,
        aggregation=args.agg,
        device=args.device,
    )
    texts = read_texts_tsv(args.input)
    corpus_records, vector_records = encode(texts, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_corpus(corpus_records, out / "corpus.jsonl")
    if cfg.emit == "per_token":
        write_per_token_vectors(vector_records, out / "vectors.jsonl")
    else:
        write_pooled_vectors(
            vector_records, out / "vectors.jsonl", aggregation=cfg.aggregation
        )
    truncated = sum(1 for r in corpus_records if r.get("truncated"))
    print(
        f"encoded {len(corpus_records)} texts ({truncated} truncated) "
        f"to {out / 'vectors.jsonl'}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="encoder-export",
        description="Export sparse-encoder outputs to interchange files",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export-vocab", help="dump the tokenizer vocabulary as TSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_vocab)

    p = sub.add_parser("encode", help="encode texts into corpus + vector JSONL")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--input", required=True, help="TSV of `id<TAB>text` lines")
    p.add_argument("--mode", default="per_token", choices=["per_token", "pooled"])
    p.add_argument("--agg", default="max", choices=["max", "sum", "cls"])
    p.add_argument("--batch-size", type=int, default=8, dest="batch_size")
    p.add_argument("--max-length", type=int, default=128, dest="max_length")
    p.add_argument("--device", default="cpu")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"encoder-export: missing file: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"encoder-export: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
