"""Command-line entry point binding the toolkit into reproducible pipelines.

Every subcommand validates its flags before touching the filesystem, writes
its outputs plus a manifest into ``--out``, and never mutates an input.
Reruns with an identical manifest produce byte-identical outputs regardless
of ``--threads``.

Exit codes: 0 success, 2 usage error, 3 missing input file, 4 invalid or
malformed input data, 1 anything else.  ``WACKYMETER_LOG`` sets the log
level (DEBUG, INFO, WARNING, ...).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import ablation as ablation_mod
from . import curve as curve_mod
from . import impact as impact_mod
from . import lexical as lexical_mod
from . import metrics as metrics_mod
from . import representation as repr_mod
from . import synthetic as synth_mod
from . import wackiness as wacky_mod
from .io import (
    load_corpus,
    load_qrels,
    load_run,
    load_vectors,
    load_vocabulary,
    save_corpus,
    save_pooled_vectors,
    save_qrels,
    save_run,
    save_vocabulary,
    write_csv,
)
from .manifest import build_manifest
from .types import ParseError, ValidationError

log = logging.getLogger("wackymeter.cli")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING_FILE = 3
EXIT_BAD_DATA = 4


def _configure_logging() -> None:
    level_name = os.environ.get("WACKYMETER_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _parse_token_set(text: str | None) -> set[int]:
    if not text:
        return set()
    return {int(part) for part in text.split(",") if part.strip() != ""}


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _require_files(*paths: str | None) -> None:
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise FileNotFoundError(p)


def _config_snapshot(args, keys: list[str]) -> dict:
    return {key: getattr(args, key) for key in keys}


def _apply_config_file(args: argparse.Namespace, defaults: dict) -> None:
    """Fill unset (None) args from a versioned JSON config file, then defaults."""
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        if cfg.get("version") != 1:
            raise ValidationError(f"{args.config}: unsupported config version")
        for key, value in cfg.items():
            if key == "version":
                continue
            if getattr(args, key, None) is None:
                setattr(args, key, value)
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_synth(args) -> int:
    _apply_config_file(args, {})
    model = synth_mod.generate_synthetic_model(
        args.vocab_size, args.corpus_size, args.query_count, args.profile, args.seed
    )
    out = _out_dir(args)
    save_vocabulary(model.vocabulary, out / "vocab.tsv")
    save_corpus(model.documents, out / "corpus.jsonl")
    save_corpus(model.queries, out / "queries.jsonl")
    save_pooled_vectors(model.doc_vectors, out / "doc_vectors.jsonl")
    save_pooled_vectors(model.query_vectors, out / "query_vectors.jsonl")
    save_qrels(model.qrels, out / "qrels.txt")
    config = _config_snapshot(
        args, ["vocab_size", "corpus_size", "query_count", "profile", "seed"]
    )
    build_manifest("synth", config, [], args.seed).write(out)
    return EXIT_OK


def cmd_index(args) -> int:
    _apply_config_file(args, {})
    _require_files(args.vocab, args.corpus, args.vectors)
    vocab = load_vocabulary(args.vocab)
    corpus = load_corpus(args.corpus, vocab.size)
    vector_file = load_vectors(args.vectors, vocab.size)
    if vector_file.format != "pooled":
        raise ValidationError("indexing needs pooled vectors; run `pool` first")

    out = _out_dir(args)
    lexical_index = lexical_mod.build_lexical_index(corpus)
    lexical_mod.save_lexical_index(lexical_index, out / "lexical_index.json")
    impact_index = impact_mod.build_impact_index(vector_file.pooled)
    impact_mod.save_impact_index(impact_index, out / "impact_index.json")
    write_csv(
        out / "posting_lengths.csv",
        ["token_id", "posting_length"],
        impact_index.posting_lengths(),
    )
    config = _config_snapshot(args, ["vocab", "corpus", "vectors"])
    build_manifest(
        "index", config, [args.vocab, args.corpus, args.vectors], args.seed
    ).write(out)
    return EXIT_OK


def cmd_pool(args) -> int:
    _apply_config_file(args, {"agg": "max"})
    mode = repr_mod.Aggregation(args.agg)
    _require_files(args.vectors)
    vector_file = load_vectors(args.vectors)
    if vector_file.format != "per_token":
        raise ValidationError("`pool` expects a per-token vector file")
    pooled = repr_mod.pool_file(vector_file.per_token, mode, vector_file.activated)
    out = _out_dir(args)
    save_pooled_vectors(pooled, out / "pooled.jsonl", activated=True,
                        aggregation=mode.value)
    config = _config_snapshot(args, ["vectors", "agg"])
    build_manifest("pool", config, [args.vectors], args.seed).write(out)
    return EXIT_OK


def cmd_search(args) -> int:
    _apply_config_file(args, {"k": 10})
    if args.k < 1:
        raise ValidationError(f"--k must be >= 1, got {args.k}")
    index_path = Path(args.index) / "impact_index.json"
    _require_files(args.vectors, str(index_path))
    vector_file = load_vectors(args.vectors)
    if vector_file.format != "pooled":
        raise ValidationError("searching needs pooled query vectors")
    index = impact_mod.load_impact_index(index_path)

    threads = args.threads or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rankings = list(
            pool.map(lambda v: impact_mod.search(v, index, args.k), vector_file.pooled)
        )

    out = _out_dir(args)
    save_run(rankings, out / "run.trec")
    config = _config_snapshot(args, ["vectors", "index", "k"])
    build_manifest(
        "search", config, [args.vectors, index_path], args.seed
    ).write(out)
    return EXIT_OK


def cmd_wackiness(args) -> int:
    _apply_config_file(args, {"k": wacky_mod.DEFAULT_TOP_K, "top": 20})
    if args.k < 1:
        raise ValidationError(f"--k must be >= 1, got {args.k}")
    special = _parse_token_set(args.special_tokens)
    impact_path = Path(args.index) / "impact_index.json"
    lexical_path = Path(args.index) / "lexical_index.json"
    _require_files(args.vocab, args.queries, args.vectors, str(impact_path),
                   str(lexical_path))
    vocab = load_vocabulary(args.vocab)
    inputs = load_corpus(args.queries, vocab.size)
    vector_file = load_vectors(args.vectors, vocab.size)
    if vector_file.format != "pooled":
        raise ValidationError("wackiness needs pooled vectors; run `pool` first")
    impact_index = impact_mod.load_impact_index(impact_path)
    lexical_index = lexical_mod.load_lexical_index(lexical_path)

    table = wacky_mod.wackiness_scores(
        inputs,
        vector_file.pooled,
        impact_index,
        lexical_index,
        k=args.k,
        special_tokens=special,
        exclude_self=args.exclude_self,
    )
    out = _out_dir(args)
    write_csv(
        out / "wackiness.csv",
        ["token_id", "token_string", "occurrences", "mean_importance", "wackiness"],
        wacky_mod.table_csv_rows(table, vocab),
    )
    report = wacky_mod.top_wacky_report(table, vocab, args.top)
    write_csv(out / "top_wacky.csv", ["token_string", "wackiness"],
              [[token, wacky] for token, wacky in report])
    wacky_mod.save_table_json(table, out / "wackiness.json")
    config = _config_snapshot(
        args, ["vocab", "queries", "vectors", "index", "k", "special_tokens",
               "exclude_self", "top"]
    )
    build_manifest(
        "wackiness", config,
        [args.vocab, args.queries, args.vectors, impact_path, lexical_path],
        args.seed,
    ).write(out)
    return EXIT_OK


def cmd_curve(args) -> int:
    _apply_config_file(args, {"bins": curve_mod.DEFAULT_BINS, "repeats": 10})
    out = _out_dir(args)
    if args.compare:
        named = []
        paths = []
        for item in args.compare:
            if "=" not in item:
                raise ValidationError(
                    f"--compare expects name=table.json, got {item!r}"
                )
            name, path = item.split("=", 1)
            _require_files(path)
            named.append((name, wacky_mod.load_table_json(path)))
            paths.append(path)
        comparison = curve_mod.compare_models(
            named, bins=args.bins, repeats=args.repeats, seed=args.seed
        )
        write_csv(
            out / "comparison.csv",
            ["model", "w_auc", "two_sigma", "group"],
            curve_mod.comparison_csv_rows(comparison),
        )
        config = _config_snapshot(args, ["compare", "bins", "repeats", "seed"])
        build_manifest("curve-compare", config, paths, args.seed).write(out)
        return EXIT_OK

    if not args.table:
        raise ValidationError("curve needs --table (or --compare)")
    _require_files(args.table)
    table = wacky_mod.load_table_json(args.table)
    curve = curve_mod.build_curve(table, args.bins, pad_to_vocab=args.pad_to_vocab)
    write_csv(out / "curve.csv", ["bin_index", "bin_mean"],
              curve_mod.curve_csv_rows(curve))
    write_csv(out / "w_auc.csv", ["w_auc", "scored_tokens"],
              [[curve_mod.w_auc(curve), curve.scored_token_count]])
    config = _config_snapshot(args, ["table", "bins", "pad_to_vocab"])
    build_manifest("curve", config, [args.table], args.seed).write(out)
    return EXIT_OK


def cmd_ablate(args) -> int:
    _apply_config_file(args, {"repeats": 10})
    impact_path = Path(args.index) / "impact_index.json"
    _require_files(args.queries, args.vectors, args.qrels, args.table,
                   str(impact_path))
    if args.vocab:
        _require_files(args.vocab)
    table = wacky_mod.load_table_json(args.table)
    thresholds = (
        _parse_int_list(args.thresholds)
        if args.thresholds
        else ablation_mod.default_thresholds(len(table.rows))
    )
    measures = (
        [m.strip() for m in args.measures.split(",")]
        if args.measures
        else list(ablation_mod.DEFAULT_MEASURES)
    )
    cfg = ablation_mod.AblationConfig(
        thresholds=thresholds,
        repeats=args.repeats,
        seed=args.seed,
        measures=measures,
        removal_pool=args.removal_pool,
    )
    vocab_size = None
    if args.removal_pool == ablation_mod.POOL_FULL_VOCABULARY:
        if not args.vocab:
            raise ValidationError("full-vocabulary pool needs --vocab")
        vocab_size = load_vocabulary(args.vocab).size

    queries = load_corpus(args.queries, vocab_size)
    vector_file = load_vectors(args.vectors)
    if vector_file.format != "pooled":
        raise ValidationError("ablation needs pooled query vectors")
    impact_index = impact_mod.load_impact_index(impact_path)
    qrels = load_qrels(args.qrels)
    special = _parse_token_set(args.special_tokens)

    report = ablation_mod.run_ablation(
        queries, vector_file.pooled, impact_index, qrels, table, cfg,
        vocab_size=vocab_size, special_tokens=special,
    )
    out = _out_dir(args)
    write_csv(
        out / "ablation.csv",
        ["threshold", "measure", "wacky_score", "random_mean", "random_std",
         "outside_band"],
        ablation_mod.report_csv_rows(report),
    )
    write_csv(out / "endpoints.csv", ["condition", "measure", "score"],
              ablation_mod.endpoints_csv_rows(report))
    config = _config_snapshot(
        args, ["queries", "vectors", "index", "qrels", "table", "thresholds",
               "repeats", "seed", "measures", "removal_pool", "special_tokens"]
    )
    build_manifest(
        "ablate", config,
        [args.queries, args.vectors, args.qrels, args.table, impact_path],
        args.seed,
    ).write(out)
    return EXIT_OK


def cmd_eval(args) -> int:
    _apply_config_file(args, {})
    _require_files(args.run, args.qrels)
    run = load_run(args.run)
    qrels = load_qrels(args.qrels)
    measures = (
        [m.strip() for m in args.measures.split(",")]
        if args.measures
        else list(ablation_mod.DEFAULT_MEASURES)
    )
    results = metrics_mod.evaluate_measures(run, qrels, measures,
                                            rel_threshold=args.rel_threshold)
    rows: list[list] = []
    for measure, result in results.items():
        for qid in sorted(result.per_query):
            rows.append([measure, qid, result.per_query[qid]])
        rows.append([measure, "all", result.mean])
    out = _out_dir(args)
    write_csv(out / "eval.csv", ["measure", "query_id", "value"], rows)
    config = _config_snapshot(args, ["run", "qrels", "measures", "rel_threshold"])
    build_manifest("eval", config, [args.run, args.qrels], args.seed).write(out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wackymeter",
        description="Quantify wacky expansion tokens in learned sparse retrieval",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap; results are identical for any value")
        p.add_argument("--config", default=None,
                       help="JSON config file; flags override its values")

    p = sub.add_parser("synth", help="generate a seeded synthetic model")
    p.add_argument("--vocab-size", type=int, required=True, dest="vocab_size")
    p.add_argument("--corpus-size", type=int, required=True, dest="corpus_size")
    p.add_argument("--query-count", type=int, required=True, dest="query_count")
    p.add_argument("--profile", default=synth_mod.PROFILE_LEXICAL,
                   help="lexical-overlap | random-token | mixed:<p>")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("index", help="build lexical and impact indices")
    p.add_argument("--vocab", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--vectors", required=True, help="pooled document vectors")
    common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("pool", help="pool per-token vectors (max | sum | cls)")
    p.add_argument("--vectors", required=True, help="per-token vector file")
    p.add_argument("--agg", default=None, choices=["max", "sum", "cls"])
    common(p)
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("search", help="batch retrieval to a TREC run file")
    p.add_argument("--vectors", required=True, help="pooled query vectors")
    p.add_argument("--index", required=True, help="directory from `index`")
    p.add_argument("--k", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("wackiness", help="score expansion-token wackiness")
    p.add_argument("--vocab", required=True)
    p.add_argument("--queries", required=True, help="tokenized inputs (JSONL)")
    p.add_argument("--vectors", required=True, help="pooled vectors for the inputs")
    p.add_argument("--index", required=True, help="directory from `index`")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--special-tokens", default=None, dest="special_tokens",
                   help="comma-separated token ids excluded from the analysis")
    p.add_argument("--exclude-self", action="store_true", dest="exclude_self",
                   help="drop an input's own id from its retrieved set")
    p.add_argument("--top", type=int, default=None,
                   help="size of the top-wacky report")
    common(p)
    p.set_defaults(func=cmd_wackiness)

    p = sub.add_parser("curve", help="wackiness curve / W-AUC / model comparison")
    p.add_argument("--table", default=None, help="wackiness.json from `wackiness`")
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--pad-to-vocab", type=int, default=None, dest="pad_to_vocab",
                   help="strict mode: pad unscored ids with wackiness 1.0")
    p.add_argument("--compare", nargs="+", default=None, metavar="NAME=TABLE",
                   help="compare models from their wackiness.json tables")
    p.add_argument("--repeats", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("ablate", help="token-removal ablation vs random baseline")
    p.add_argument("--queries", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("--index", required=True, help="directory from `index`")
    p.add_argument("--qrels", required=True)
    p.add_argument("--table", required=True, help="wackiness.json from `wackiness`")
    p.add_argument("--thresholds", default=None,
                   help="comma-separated removal thresholds")
    p.add_argument("--repeats", type=int, default=None)
    p.add_argument("--measures", default=None,
                   help="comma-separated, e.g. MRR@10,Recall@100")
    p.add_argument("--removal-pool", default=ablation_mod.POOL_EXPANSION_OBSERVED,
                   choices=[ablation_mod.POOL_EXPANSION_OBSERVED,
                            ablation_mod.POOL_FULL_VOCABULARY],
                   dest="removal_pool")
    p.add_argument("--vocab", default=None,
                   help="needed for the full-vocabulary pool")
    p.add_argument("--special-tokens", default=None, dest="special_tokens")
    common(p)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("eval", help="evaluate a TREC run against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--measures", default=None)
    p.add_argument("--rel-threshold", type=int, default=1, dest="rel_threshold")
    common(p)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        log.error("missing input file: %s", exc)
        print(f"wackymeter: missing input file: {exc}", file=sys.stderr)
        return EXIT_MISSING_FILE
    except (ParseError, ValidationError) as exc:
        log.error("%s", exc)
        print(f"wackymeter: {exc}", file=sys.stderr)
        return EXIT_BAD_DATA
    except Exception as exc:  # pragma: no cover - defensive
        log.exception("unexpected failure")
        print(f"wackymeter: unexpected failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
