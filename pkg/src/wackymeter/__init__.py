"""wackymeter: quantify wacky expansion tokens in learned sparse retrieval.

The package is organized as a small numpy-backed library:

* :mod:`wackymeter.types`
  domain types (vocabulary, tokenized inputs, sparse vectors, rankings)
* :mod:`wackymeter.io`
  interchange-file parsing and canonical serialization
* :mod:`wackymeter.synthetic`
  seeded synthetic model generator for end-to-end runs
* :mod:`wackymeter.lexical`
  collection statistics, TF-IDF, BM25 and RM3 expansion
* :mod:`wackymeter.impact`
  inverted impact index with exact top-k dot-product search
* :mod:`wackymeter.representation`
  activation, pooling, and sparsity regularizer evaluators
* :mod:`wackymeter.wackiness`
  expansion sets, lexical importance, wackiness scores
* :mod:`wackymeter.curve`
  normalized wackiness curves, W-AUC, model comparison
* :mod:`wackymeter.metrics`
  MRR / Recall / NDCG over TREC-style runs
* :mod:`wackymeter.ablation`
  token-removal experiments against a random baseline
* :mod:`wackymeter.cli`
  the ``wackymeter`` command
"""

from .ablation import AblationConfig, AblationReport, remove_tokens, run_ablation
from .curve import WackinessCurve, build_curve, compare_models, w_auc
from .impact import ImpactIndex, build_impact_index, exhaustive_search, search
from .lexical import (
    CollectionStats,
    LexicalIndex,
    bm25_search,
    build_lexical_index,
    idf,
    rm3_expand,
)
from .metrics import EvalResult, mrr_at_k, ndcg_at_k, recall_at_k
from .representation import (
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
from .synthetic import SyntheticModel, generate_synthetic_model
from .types import (
    ParseError,
    PerTokenMatrix,
    Qrels,
    Ranking,
    SparseVector,
    TokenizedInput,
    ValidationError,
    Vocabulary,
)
from .wackiness import (
    ExpansionRecord,
    TokenWackinessTable,
    expansion_set,
    lexical_importance,
    top_wacky_report,
    wackiness_scores,
)

__version__ = "0.1.0"
