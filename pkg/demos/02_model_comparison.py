# %% [markdown]
# # Comparing expansion models, including a BM25+RM3 baseline
#
# Three "expanders" run on the same corpus and query set:
#
# * **lexical-overlap** — every expansion token comes from documents that
#   co-occur with the input (grounded expansion),
# * **random-token** — expansion tokens are uniform vocabulary samples,
# * **BM25+RM3** — queries expanded by pseudo-relevance feedback and scored
#   with query-weighted BM25 served from an impact index.
#
# Bootstrap resampling over the shared query set yields W-AUC as mean ± 2σ
# with paired significance groups: grounded expansion should come out least
# wacky, random most.

# %%
from wackymeter.curve import compare_models, comparison_csv_rows
from wackymeter.impact import build_impact_index
from wackymeter.lexical import (
    DEFAULT_B,
    DEFAULT_K1,
    bm25_idf,
    build_lexical_index,
    rm3_expand,
)
from wackymeter.synthetic import generate_synthetic_model
from wackymeter.types import SparseVector
from wackymeter.wackiness import wackiness_scores

SEED = 7
tables = []

# %% [markdown]
# ## The two synthetic expanders

# %%
for profile in ("lexical-overlap", "random-token"):
    model = generate_synthetic_model(500, 300, 60, profile, SEED)
    impact = build_impact_index(model.doc_vectors)
    lexical = build_lexical_index(model.documents)
    table = wackiness_scores(
        model.queries, model.query_vectors, impact, lexical, k=10
    )
    tables.append((profile, table))

# %% [markdown]
# ## BM25+RM3 as a modular expansion baseline
#
# Documents are indexed with precomputed BM25 impacts, so the inner product
# of an RM3 term distribution with a document vector is exactly the
# query-weighted Okapi BM25 score.  The wackiness pipeline then treats RM3
# like any other sparse model: its expansion set is whatever the feedback
# step added beyond the original query tokens.

# %%
model = generate_synthetic_model(500, 300, 60, "lexical-overlap", SEED)
lexical = build_lexical_index(model.documents)

avgdl = lexical.stats.avg_doc_len
bm25_docs = []
for doc in model.documents:
    weights = {}
    for token, tf in lexical.doc_tf[doc.id].items():
        norm = 1.0 - DEFAULT_B + DEFAULT_B * (len(doc.tokens) / avgdl)
        weights[token] = bm25_idf(token, lexical.stats) * (
            tf * (DEFAULT_K1 + 1.0) / (tf + DEFAULT_K1 * norm)
        )
    bm25_docs.append(SparseVector(doc.id, weights))
bm25_impact = build_impact_index(bm25_docs)

rm3_vectors = [
    rm3_expand(query, lexical, fb_docs=10, fb_terms=10, orig_weight=0.5)
    for query in model.queries
]
rm3_table = wackiness_scores(model.queries, rm3_vectors, bm25_impact, lexical, k=10)
tables.append(("bm25+rm3", rm3_table))

# %% [markdown]
# ## W-AUC with bootstrap confidence and significance groups

# %%
comparison = compare_models(tables, bins=50, repeats=10, seed=SEED)
print(f"{'model':<16s} {'W-AUC':>7s} {'±2σ':>7s}  group")
for name, auc, two_sigma, group in comparison_csv_rows(comparison):
    print(f"{name:<16s} {auc:7.3f} {two_sigma:7.3f}  {group}")
