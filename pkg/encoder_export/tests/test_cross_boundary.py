"""Cross-boundary consistency with the analysis toolkit.

The toolkit is consumed strictly through its external interfaces: the
`wackymeter` command line and the interchange files.  Fifty short texts go
through the adapter in both emit modes; the toolkit's `pool` subcommand
aggregates the per-token export and must agree with the adapter's own
pooled output within 1e-4.  The exported files must also pass the
toolkit's loaders and validations end to end.
"""

from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from encoder_export.cli import main as cli_main

WACKYMETER = shutil.which("wackymeter")

pytestmark = pytest.mark.skipif(
    WACKYMETER is None, reason="wackymeter CLI not on PATH"
)


def wackymeter(*argv) -> subprocess.CompletedProcess:
    return subprocess.run(
        [WACKYMETER, *map(str, argv)], capture_output=True, text=True
    )


@pytest.fixture(scope="module")
def exported(checkpoint, fifty_texts, tmp_path_factory):
    root = tmp_path_factory.mktemp("exported")
    src = root / "texts.tsv"
    src.write_text(
        "".join(f"{tid}\t{text}\n" for tid, text in fifty_texts), encoding="utf-8"
    )
    assert cli_main(
        ["export-vocab", "--checkpoint", checkpoint, "--out", str(root)]
    ) == 0
    for mode, agg in (("per_token", "max"), ("pooled", "max")):
        out = root / mode
        assert cli_main(
            ["encode", "--checkpoint", checkpoint, "--input", str(src),
             "--mode", mode, "--agg", agg, "--out", str(out)]
        ) == 0
    return root


def load_pooled(path) -> dict[str, dict[str, float]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    assert json.loads(lines[0])["format"] == "pooled"
    return {
        record["id"]: record["weights"]
        for record in map(json.loads, lines[1:])
    }


class TestCrossBoundary:
    def test_pooled_max_matches_primary_aggregation_within_1e4(self, exported, tmp_path):
        result = wackymeter(
            "pool", "--vectors", exported / "per_token" / "vectors.jsonl",
            "--agg", "max", "--out", tmp_path / "pooled",
        )
        assert result.returncode == 0, result.stderr
        primary = load_pooled(tmp_path / "pooled" / "pooled.jsonl")
        adapter = load_pooled(exported / "pooled" / "vectors.jsonl")

        assert set(primary) == set(adapter) and len(primary) == 50
        for text_id, weights in adapter.items():
            other = primary[text_id]
            assert set(weights) == set(other)
            for token, weight in weights.items():
                assert abs(weight - other[token]) <= 1e-4

    def test_exports_pass_toolkit_validations(self, exported, tmp_path):
        """vocab + corpus + pooled vectors all load and validate in `index`."""
        result = wackymeter(
            "index", "--vocab", exported / "vocab.tsv",
            "--corpus", exported / "pooled" / "corpus.jsonl",
            "--vectors", exported / "pooled" / "vectors.jsonl",
            "--out", tmp_path / "index",
        )
        assert result.returncode == 0, result.stderr
        assert (tmp_path / "index" / "impact_index.json").is_file()

    def test_exports_feed_wackiness_pipeline(self, exported, tmp_path):
        """The whole document-side analysis runs on adapter output alone."""
        index_dir = tmp_path / "index"
        assert wackymeter(
            "index", "--vocab", exported / "vocab.tsv",
            "--corpus", exported / "pooled" / "corpus.jsonl",
            "--vectors", exported / "pooled" / "vectors.jsonl",
            "--out", index_dir,
        ).returncode == 0
        result = wackymeter(
            "wackiness", "--vocab", exported / "vocab.tsv",
            "--queries", exported / "pooled" / "corpus.jsonl",
            "--vectors", exported / "pooled" / "vectors.jsonl",
            "--index", index_dir, "--k", 10, "--out", tmp_path / "wacky",
        )
        assert result.returncode == 0, result.stderr
        lines = (tmp_path / "wacky" / "wackiness.csv").read_text().splitlines()
        assert lines[0] == "token_id,token_string,occurrences,mean_importance,wackiness"
        assert len(lines) > 1

    def test_every_emitted_token_id_within_vocab(self, exported):
        vocab_size = len(
            (exported / "vocab.tsv").read_text(encoding="utf-8").splitlines()
        )
        lines = (exported / "per_token" / "vectors.jsonl").read_text().splitlines()
        for record in map(json.loads, lines[1:]):
            for row in record["rows"]:
                assert all(0 <= int(t) < vocab_size for t in row["weights"])
