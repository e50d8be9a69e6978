"""Pipeline orchestration and the read path shared by the CLI and the HTTP
service.

Build side: corpus -> sentences -> equivalence classes -> tagged pairs ->
classifier -> inverted index (optionally persisted). Read side: an immutable
``SearchEngine`` wrapping one loaded index; all request handlers share it,
and the lazy SimRank cache is its only mutable state.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import relex
from .corpus import (
    Corpus,
    EType,
    load_annotated_corpus,
    parse_chemprot,
    split_sentences,
)
from .errors import ConfigurationError
from .graph import (
    BipartiteGraph,
    build_bipartite,
    graph_stats,
    GraphStats,
    SimRankCache,
    SimRankParams,
    top_similar,
)
from .index import (
    build_index,
    compute_fingerprint,
    InvertedIndex,
    load_index,
    postings_for,
    related_entities,
    RelationKey,
    save_index,
)
from .matching import DEFAULT_MIN_SIMILARITY, Matcher
from .normalization import build_equivalence_classes
from .schemas import (
    EntityCard,
    EvidenceItem,
    MatchedEntity,
    RelatedEntity,
    SearchResponse,
    SimilarEntity,
)

logger = logging.getLogger(__name__)

EVIDENCE_PAGE_SIZE = 20


@dataclass
class PipelineConfig:
    corpus: Path | None = None
    chemprot_dir: Path | None = None
    classifier: str = "oracle"
    gold: Path | None = None
    predictions: Path | None = None
    index_out: Path | None = None
    simrank: SimRankParams = field(default_factory=SimRankParams)

    def validate(self) -> None:
        if (self.corpus is None) == (self.chemprot_dir is None):
            raise ConfigurationError("exactly one of --corpus/--chemprot-dir is required")
        if self.classifier not in relex.CLASSIFIER_HANDLES:
            raise ConfigurationError(
                f"unknown classifier {self.classifier!r}; expected one of "
                f"{', '.join(relex.CLASSIFIER_HANDLES)}")
        for path in (self.corpus, self.chemprot_dir, self.gold, self.predictions):
            if path is not None and not Path(path).exists():
                raise ConfigurationError(f"path does not exist: {path}")


@dataclass
class BuildReport:
    documents: int = 0
    sentences: int = 0
    mentions: int = 0
    classes: int = 0
    instances: int = 0
    skipped_pairs: int = 0
    dropped_relations: int = 0
    positive_pairs: int = 0
    relation_keys: int = 0
    postings: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "documents": self.documents,
            "sentences": self.sentences,
            "mentions": self.mentions,
            "classes": self.classes,
            "instances": self.instances,
            "skipped_pairs": self.skipped_pairs,
            "dropped_relations": self.dropped_relations,
            "positive_pairs": self.positive_pairs,
            "relation_keys": self.relation_keys,
            "postings": self.postings,
        }


def run_pipeline(config: PipelineConfig) -> tuple[InvertedIndex, BuildReport]:
    """Execute the full build: ingest, normalize, classify, index, persist."""
    config.validate()
    report = BuildReport()

    gold_relations = None
    if config.chemprot_dir is not None:
        # the oracle replays the label of every annotated pair, so it is
        # built from the full relation list; duplicate annotations cannot
        # inflate the index because same-class same-sentence postings collapse
        documents, mentions, gold_relations, summary = parse_chemprot(config.chemprot_dir)
        sentences = [s for d in documents for s in split_sentences(d.body, d.doc_id)]
        report.dropped_relations = summary.dropped_cross_sentence
    else:
        documents, sentences, mentions = load_annotated_corpus(config.corpus)
    corpus = Corpus(documents, sentences)
    report.documents = len(documents)
    report.sentences = len(sentences)
    report.mentions = len(mentions)

    classes, assignment = build_equivalence_classes(mentions)
    report.classes = len(classes)

    gold = relex.read_pair_scores(config.gold) if config.gold is not None else None
    predictions_map = (relex.read_pair_scores(config.predictions)
                       if config.predictions is not None else None)
    classifier = relex.resolve_classifier(
        config.classifier,
        gold={k: v >= relex.DECISION_THRESHOLD for k, v in gold.items()} if gold else None,
        gold_relations=gold_relations,
        predictions=predictions_map,
    )

    by_sentence: dict[tuple[str, int], list] = {}
    for mention in mentions:
        by_sentence.setdefault((mention.doc_id, mention.sent_index), []).append(mention)
    instances = []
    expected_pairs = 0
    for sentence in sentences:
        group = by_sentence.get((sentence.doc_id, sentence.sent_index))
        if not group:
            continue
        n_chem = sum(1 for m in group if m.etype is EType.CHEMICAL)
        expected_pairs += n_chem * (len(group) - n_chem)
        instances.extend(relex.expand_pairs(sentence, group))
    report.instances = len(instances)
    report.skipped_pairs = expected_pairs - len(instances)

    predictions = [relex.classify(inst, classifier) for inst in instances]
    report.positive_pairs = sum(1 for p in predictions if p.positive)

    index = build_index(corpus, classes, assignment, predictions)
    report.relation_keys = len(index.postings)
    report.postings = sum(len(plist) for plist in index.postings.values())

    if config.index_out is not None:
        digest = save_index(index, config.index_out)
        logger.info("wrote index %s (sha256:%s)", config.index_out, digest[:12])
    return index, report


class SearchEngine:
    """Read-only search facade over one loaded index.

    The index, matcher, and graph are immutable after construction; the
    SimRank cache mutates only under its own lock, so a single engine can be
    shared by any number of concurrent readers.
    """

    def __init__(self, index: InvertedIndex,
                 min_similarity: float = DEFAULT_MIN_SIMILARITY,
                 simrank_params: SimRankParams | None = None,
                 evidence_page_size: int = EVIDENCE_PAGE_SIZE):
        self.index = index
        self.min_similarity = min_similarity
        self.evidence_page_size = evidence_page_size
        self.matcher = Matcher(index.classes, min_similarity=min_similarity)
        self.graph: BipartiteGraph = build_bipartite(index)
        self.simrank_cache = SimRankCache(self.graph, simrank_params)

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> "SearchEngine":
        return cls(load_index(path), **kwargs)

    @property
    def fingerprint(self) -> str:
        return compute_fingerprint(self.index)

    def search(self, query: str, k: int = 5,
               min_similarity: float | None = None,
               offset: int = 0) -> SearchResponse:
        """Resolve the query to its best class and assemble the full result:
        ranked related partners with evidence windows plus similar entities."""
        matches = self.matcher.resolve(query, min_similarity)
        if not matches:
            return SearchResponse(query=query, matched=None, related=[], similar=[])
        best = matches[0]
        cls = self.index.class_of(best.class_id)
        matched = MatchedEntity(
            class_id=cls.class_id, canonical=cls.canonical,
            external_ids=sorted(cls.external_ids), similarity=best.similarity,
        )
        related = []
        for partner_id, count in related_entities(self.index, cls.class_id):
            partner = self.index.class_of(partner_id)
            if cls.etype is EType.CHEMICAL:
                key = RelationKey(cls.class_id, partner_id)
            else:
                key = RelationKey(partner_id, cls.class_id)
            window = postings_for(self.index, key)[offset:offset + self.evidence_page_size]
            evidence = []
            for posting in window:
                meta = self.index.doc_meta[posting.doc_id]
                evidence.append(EvidenceItem(
                    doc_id=posting.doc_id, title=meta.title,
                    source_url=meta.source_url, sentence_text=posting.sentence_text,
                ))
            related.append(RelatedEntity(
                class_id=partner_id, canonical=partner.canonical,
                co_mention_count=count, evidence=evidence,
            ))
        similar = []
        if cls.class_id in self.graph:
            scores = self.simrank_cache.scores_for(cls.class_id)
            for other_id, score in top_similar(scores, cls.class_id, k):
                similar.append(SimilarEntity(
                    class_id=other_id,
                    canonical=self.graph.canonical[other_id],
                    score=score,
                ))
        return SearchResponse(query=query, matched=matched,
                              related=related, similar=similar)

    def entity_card(self, class_id: int) -> EntityCard:
        cls = self.index.class_of(class_id)
        return EntityCard(
            class_id=cls.class_id, etype=cls.etype.value, canonical=cls.canonical,
            surfaces=dict(cls.surface_counts), external_ids=sorted(cls.external_ids),
            degree=len(self.index.partners.get(class_id, [])),
        )

    def stats(self) -> GraphStats:
        return graph_stats(self.graph)

    def warm_simrank(self) -> None:
        self.simrank_cache.warm()
