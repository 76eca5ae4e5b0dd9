# %% [markdown]
# # Scoring expansion-token wackiness, end to end
#
# This walkthrough builds a small synthetic "sparse encoder" whose expansion
# behaviour we control, then runs the full analysis pipeline:
#
# 1. generate a corpus, queries, and sparse vectors (half the expansion
#    tokens grounded in co-occurring text, half drawn at random),
# 2. build the impact index (retrieval) and the lexical index (statistics),
# 3. retrieve each query's neighborhood and measure how lexically important
#    every expansion token is inside it,
# 4. aggregate into per-token wackiness scores and inspect the wackiest
#    tokens, the wackiness curve, and its W-AUC.

# %%
from wackymeter.curve import build_curve, w_auc
from wackymeter.impact import build_impact_index, search
from wackymeter.lexical import build_lexical_index
from wackymeter.synthetic import generate_synthetic_model
from wackymeter.wackiness import top_wacky_report, wackiness_scores

model = generate_synthetic_model(
    vocab_size=500, corpus_size=300, query_count=60,
    expansion_profile="mixed:0.5", seed=7,
)
print(f"corpus: {len(model.documents)} docs, {len(model.queries)} queries, "
      f"|V| = {model.vocabulary.size}")

# %% [markdown]
# ## Indices
#
# The impact index serves exact top-k dot-product retrieval over the model's
# document vectors; the lexical index carries term frequencies, document
# frequencies and lengths for the TF-IDF importance computation.

# %%
impact = build_impact_index(model.doc_vectors)
lexical = build_lexical_index(model.documents)

example = model.query_vectors[0]
top = search(example, impact, 5)
print(f"top-5 for {example.id}:")
for doc_id, score in top.entries:
    print(f"  {doc_id}  {score:.3f}")

# %% [markdown]
# ## Wackiness scores
#
# For each query, expansion tokens are the activated dimensions that are not
# part of the query's own tokens.  Each one gets a TF-IDF importance inside
# the query's retrieved top-10; per-token averages are min-max normalized
# and inverted, so 1.0 means "never lexically useful where it fires".

# %%
table = wackiness_scores(
    model.queries, model.query_vectors, impact, lexical, k=10
)
print(f"scored tokens: {len(table.rows)}")
print("\nwackiest tokens:")
for token, wacky in top_wacky_report(table, model.vocabulary, 10):
    print(f"  {token}  {wacky:.3f}")

# %% [markdown]
# ## Curve and W-AUC
#
# Ranking all scored tokens by wackiness and averaging over equal-fraction
# bins gives a curve comparable across models with different vocabularies;
# its normalized area (W-AUC) summarizes how widespread wacky tokens are.

# %%
curve = build_curve(table, bins=20)
print("bin means:", " ".join(f"{m:.2f}" for m in curve.bin_means))
print(f"W-AUC = {w_auc(curve):.3f}")
