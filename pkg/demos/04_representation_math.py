# %% [markdown]
# # Representation building blocks: activation, pooling, regularizers
#
# The interchange format can carry raw per-token logits; everything a sparse
# encoder does after its transformer — the log(1+ReLU) activation, pooling
# across positions, and the sparsity regularizers that shape posting lists —
# is reproduced here on a toy example.

# %%
import math

from wackymeter.representation import (
    Aggregation,
    Batch,
    RegularizerConfig,
    RegularizerKind,
    activate,
    aggregate,
    combined_regularizer,
    flops_loss,
    l1_loss,
)
from wackymeter.types import PerTokenMatrix

raw_rows = [
    (0, {101: 3.2, 204: -1.0, 310: 0.4}),
    (1, {101: 1.1, 310: 2.7, 99: -0.2}),
    (2, {204: 0.9, 99: 0.0}),
]
activated = [(pos, activate(row)) for pos, row in raw_rows]
print("activated rows (negatives and zeros vanish):")
for pos, row in activated:
    rendered = ", ".join(f"{t}:{w:.3f}" for t, w in sorted(row.items()))
    print(f"  pos {pos}: {rendered}")
assert activate({0: math.e - 1.0})[0] == 1.0  # ln(1 + (e-1)) = 1

# %% [markdown]
# ## Pooling
#
# MAX keeps each dimension's strongest evidence, SUM accumulates (and grows
# with input length), CLS trusts a single designated position.

# %%
matrix = PerTokenMatrix("doc-0", activated, cls_position=0)
for mode in (Aggregation.MAX, Aggregation.SUM, Aggregation.CLS):
    vec = aggregate(matrix, mode)
    rendered = ", ".join(f"{t}:{w:.3f}" for t, w in vec.sorted_items())
    print(f"{mode.value:>4s}: {rendered}")

# %% [markdown]
# ## Sparsity regularizers
#
# FLOPs squares each dimension's mean activation over the batch, punishing
# terms that fire everywhere (long posting lists); L1 charges every vector
# for its total mass regardless of how the batch distributes it.

# %%
queries = Batch([aggregate(matrix, Aggregation.MAX)])
docs = Batch(
    [
        aggregate(PerTokenMatrix("doc-1", activated[:2]), Aggregation.MAX),
        aggregate(PerTokenMatrix("doc-2", activated[1:]), Aggregation.MAX),
    ]
)
print(f"flops(docs) = {flops_loss(docs):.4f}")
print(f"l1(docs)    = {l1_loss(docs):.4f}")

cfg = RegularizerConfig(lambda_q=0.08, lambda_d=0.06, kind=RegularizerKind.FLOPS)
print(f"combined λq·L(q) + λd·L(d) = {combined_regularizer(queries, docs, cfg):.4f}")
