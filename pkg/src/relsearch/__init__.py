"""Relation-aware entity search over biomedical abstracts."""

from .corpus import (
    binary_label,
    CprLabel,
    dedup_relations,
    Document,
    EntityMention,
    EType,
    GoldRelation,
    load_annotated_corpus,
    parse_chemprot,
    Sentence,
    split_sentences,
)
from .engine import BuildReport, PipelineConfig, run_pipeline, SearchEngine
from .graph import (
    build_bipartite,
    graph_stats,
    simrank,
    SimRankParams,
    top_similar,
)
from .index import (
    build_index,
    InvertedIndex,
    load_index,
    Posting,
    postings_for,
    related_entities,
    RelationKey,
    save_index,
)
from .matching import generalized_jaccard, Matcher, resolve_query, trigram_profile
from .normalization import (
    build_equivalence_classes,
    canonical_mention,
    EntityClass,
    lookup_by_alias,
)
from .relex import classify, evaluate, expand_pairs, insert_tags, TaggedInstance

__version__ = "0.1.0"

__all__ = [
    "binary_label", "build_bipartite", "build_equivalence_classes",
    "build_index", "BuildReport", "canonical_mention", "classify", "CprLabel",
    "dedup_relations", "Document", "EntityClass", "EntityMention", "EType",
    "evaluate", "expand_pairs", "generalized_jaccard", "GoldRelation",
    "graph_stats", "insert_tags", "InvertedIndex", "load_annotated_corpus",
    "load_index", "Matcher", "parse_chemprot", "PipelineConfig", "Posting",
    "postings_for", "related_entities", "RelationKey", "resolve_query",
    "run_pipeline", "save_index", "SearchEngine", "Sentence", "simrank",
    "SimRankParams", "split_sentences", "TaggedInstance", "top_similar",
    "trigram_profile",
]
