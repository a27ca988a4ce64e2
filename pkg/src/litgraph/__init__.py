"""Concept co-occurrence knowledge engine.

Extracts concept pairs from article titles and abstracts by dictionary
matching, accumulates them as statistics-bearing relation triples, embeds
the resulting weighted graph with biased random walks plus skip-gram
training, and serves relatedness queries over HTTP.
"""

from .corpus import ArticleRecord, UpdateBatch, parse_article_file
from .embedding import EmbeddingModel
from .errors import (
    ConceptNotFoundError,
    ConfigError,
    CorpusFormatError,
    DegenerateQueryError,
    DuplicateConceptIdError,
    EmptyLexiconError,
    InsufficientDataError,
    InvalidTripleError,
    LexiconParseError,
    LitgraphError,
    RelationNotFoundError,
)
from .evaluation import (
    AurocReport,
    HoldoutReport,
    auroc_exact,
    auroc_link_prediction,
    temporal_holdout,
)
from .extractor import (
    RelationTriple,
    SpeciesLexicon,
    extract_relations,
    match_concepts,
    split_sentences,
    tokenize,
)
from .graph import RelationGraph, build_graph
from .lexicon import (
    ConceptCategory,
    ConceptEntry,
    Lexicon,
    SurfaceIndex,
    compile_surface_index,
    load_lexicon,
    load_stoplist,
)
from .semantics import (
    combine,
    mutual_rank,
    related_not_connected,
    top_k_related,
)
from .sgns import SGNSConfig, train_embeddings
from .store import (
    RelationSummary,
    SnapshotView,
    Store,
    format_probability,
    load_snapshot,
    relation_key,
)
from .walks import WalkConfig, generate_walks, step_distribution

__version__ = "0.1.0"

__all__ = [
    "ArticleRecord",
    "AurocReport",
    "ConceptCategory",
    "ConceptEntry",
    "ConceptNotFoundError",
    "ConfigError",
    "CorpusFormatError",
    "DegenerateQueryError",
    "DuplicateConceptIdError",
    "EmbeddingModel",
    "EmptyLexiconError",
    "HoldoutReport",
    "InsufficientDataError",
    "InvalidTripleError",
    "Lexicon",
    "LexiconParseError",
    "LitgraphError",
    "RelationGraph",
    "RelationNotFoundError",
    "RelationSummary",
    "RelationTriple",
    "SGNSConfig",
    "SnapshotView",
    "SpeciesLexicon",
    "Store",
    "SurfaceIndex",
    "UpdateBatch",
    "WalkConfig",
    "auroc_exact",
    "auroc_link_prediction",
    "build_graph",
    "combine",
    "compile_surface_index",
    "extract_relations",
    "format_probability",
    "generate_walks",
    "load_lexicon",
    "load_snapshot",
    "load_stoplist",
    "match_concepts",
    "mutual_rank",
    "parse_article_file",
    "related_not_connected",
    "relation_key",
    "split_sentences",
    "step_distribution",
    "temporal_holdout",
    "tokenize",
    "top_k_related",
    "train_embeddings",
    "__version__",
]
