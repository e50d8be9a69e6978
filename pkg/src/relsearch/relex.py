"""Pair expansion, tagging, and binary relation classification.

Every co-sentential (chemical, protein) mention pair becomes one tagged
instance: the chemical span is wrapped in <e1></e1>, the protein span in
<e2></e2>, and the rest of the sentence is unchanged. A pluggable binary
classifier then scores each instance; three implementations are registered:

``oracle``        replays known gold labels (end-to-end testing)
``cue-baseline``  fires on a fixed list of relation cue lemmas
``external``      reads scores from a sidecar TSV, so a separately trained
                  model can slot in without being a dependency

The sidecar format is UTF-8 TSV with columns
``doc_id, sent_index, chem_mention_id, prot_mention_id, score``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

from .corpus import binary_label, EntityMention, EType, GoldRelation, Sentence
from .errors import (
    ConfigurationError,
    MalformedRowError,
    MissingPredictionError,
    SpanOverlapError,
)

logger = logging.getLogger(__name__)

DECISION_THRESHOLD = 0.5

# (doc_id, sent_index, chem_mention_id, prot_mention_id)
PairKey = tuple[str, int, str, str]


@dataclass(frozen=True)
class TaggedInstance:
    doc_id: str
    sent_index: int
    chem_mention_id: str
    prot_mention_id: str
    tagged_text: str

    @property
    def pair_key(self) -> PairKey:
        return (self.doc_id, self.sent_index, self.chem_mention_id, self.prot_mention_id)


@dataclass(frozen=True)
class RelationPrediction:
    instance: TaggedInstance
    positive: bool
    score: float


@dataclass(frozen=True)
class EvalMetrics:
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "EvalMetrics":
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        return cls(tp, fp, fn, tn, precision, recall, f1)


# ---------------------------------------------------------------------------
# Tagging
# ---------------------------------------------------------------------------

def insert_tags(sentence_text: str, chem_span: tuple[int, int],
                prot_span: tuple[int, int]) -> str:
    """Wrap the chemical span in <e1></e1> and the protein span in <e2></e2>.

    Raises SpanOverlapError for overlapping (including nested) spans, where
    tag placement would be ambiguous.
    """
    for start, end in (chem_span, prot_span):
        if not (0 <= start <= end <= len(sentence_text)):
            raise ValueError(f"span [{start},{end}) outside sentence of length "
                             f"{len(sentence_text)}")
    (c0, c1), (p0, p1) = chem_span, prot_span
    if max(c0, p0) < min(c1, p1):
        raise SpanOverlapError(f"spans [{c0},{c1}) and [{p0},{p1}) overlap")
    text = sentence_text
    # insert the later span first so earlier offsets stay valid
    for (start, end), tag in sorted(
            [(prot_span, "e2"), (chem_span, "e1")],
            key=lambda item: (item[0][0], item[0][1]), reverse=True):
        text = f"{text[:start]}<{tag}>{text[start:end]}</{tag}>{text[end:]}"
    return text


def expand_pairs(sentence: Sentence,
                 mentions: Sequence[EntityMention]) -> list[TaggedInstance]:
    """One tagged instance per (chemical, protein) mention pair in a sentence.

    Instances come out ordered by chemical offset then protein offset; pairs
    with overlapping spans are skipped with a logged warning.
    """
    for m in mentions:
        if m.doc_id != sentence.doc_id or m.sent_index != sentence.sent_index:
            raise ValueError(f"mention {m.mention_id!r} is not in sentence "
                             f"({sentence.doc_id!r}, {sentence.sent_index})")
    chems = sorted((m for m in mentions if m.etype is EType.CHEMICAL),
                   key=lambda m: (m.start, m.end, m.mention_id))
    prots = sorted((m for m in mentions if m.etype is EType.PROTEIN),
                   key=lambda m: (m.start, m.end, m.mention_id))
    instances: list[TaggedInstance] = []
    skipped = 0
    for chem in chems:
        for prot in prots:
            try:
                tagged = insert_tags(sentence.text, (chem.start, chem.end),
                                     (prot.start, prot.end))
            except SpanOverlapError:
                skipped += 1
                continue
            instances.append(TaggedInstance(
                doc_id=sentence.doc_id, sent_index=sentence.sent_index,
                chem_mention_id=chem.mention_id, prot_mention_id=prot.mention_id,
                tagged_text=tagged,
            ))
    if skipped:
        logger.warning("skipped %d overlapping pair(s) in (%s, %d)",
                       skipped, sentence.doc_id, sentence.sent_index)
    return instances


# ---------------------------------------------------------------------------
# Classifiers
# ---------------------------------------------------------------------------

class Classifier(Protocol):
    def score(self, instance: TaggedInstance) -> float: ...


class OracleClassifier:
    """Replays known gold labels; pairs without a gold entry are negative."""

    def __init__(self, gold: Mapping[PairKey, bool]):
        self._gold = dict(gold)

    @classmethod
    def from_gold_relations(cls, relations: Iterable[GoldRelation]) -> "OracleClassifier":
        gold: dict[PairKey, bool] = {}
        for rel in relations:
            key = (rel.doc_id, rel.sent_index, rel.chem_mention_id, rel.prot_mention_id)
            gold[key] = gold.get(key, False) or binary_label(rel.cpr)
        return cls(gold)

    def score(self, instance: TaggedInstance) -> float:
        return 1.0 if self._gold.get(instance.pair_key, False) else 0.0


CUE_LEMMAS = (
    "inhibit", "activat", "bind", "regulat", "antagonist", "agonist",
    "substrate", "cofactor", "block", "suppress", "induc", "phosphorylat",
    "cleav", "modulat",
)


class CueBaselineClassifier:
    """Scores 1.0 when any cue lemma occurs anywhere in the sentence."""

    def score(self, instance: TaggedInstance) -> float:
        text = instance.tagged_text.casefold()
        return 1.0 if any(cue in text for cue in CUE_LEMMAS) else 0.0


class ExternalClassifier:
    """Scores supplied by a sidecar predictions file."""

    def __init__(self, scores: Mapping[PairKey, float]):
        self._scores = dict(scores)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "ExternalClassifier":
        return cls(read_pair_scores(path))

    def score(self, instance: TaggedInstance) -> float:
        try:
            return self._scores[instance.pair_key]
        except KeyError:
            raise MissingPredictionError(
                f"no sidecar score for pair {instance.pair_key}") from None


def read_pair_scores(path: str | Path) -> dict[PairKey, float]:
    """Read a sidecar TSV of per-pair scores (or 0/1 gold labels)."""
    scores: dict[PairKey, float] = {}
    with open(path, encoding="utf-8") as handle:
        for row_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) != 5:
                raise MalformedRowError(
                    f"{path}:{row_no}: expected 5 columns, got {len(cells)}")
            doc_id, sent_text, chem_id, prot_id, score_text = cells
            try:
                sent_index = int(sent_text)
                score = float(score_text)
            except ValueError:
                raise MalformedRowError(f"{path}:{row_no}: non-numeric field") from None
            if not 0.0 <= score <= 1.0:
                raise MalformedRowError(f"{path}:{row_no}: score {score} outside [0,1]")
            scores[(doc_id, sent_index, chem_id, prot_id)] = score
    return scores


CLASSIFIER_HANDLES = ("oracle", "cue-baseline", "external")


def resolve_classifier(handle: str, *,
                       gold: Mapping[PairKey, bool] | None = None,
                       gold_relations: Iterable[GoldRelation] | None = None,
                       predictions: Mapping[PairKey, float] | None = None) -> Classifier:
    """Instantiate a registered classifier by handle."""
    if handle == "oracle":
        if gold is not None:
            return OracleClassifier(gold)
        if gold_relations is not None:
            return OracleClassifier.from_gold_relations(gold_relations)
        raise ConfigurationError("the oracle classifier needs gold labels "
                                 "(a gold sidecar file or a relation-annotated corpus)")
    if handle == "cue-baseline":
        return CueBaselineClassifier()
    if handle == "external":
        if predictions is None:
            raise ConfigurationError("the external classifier needs a predictions file")
        return ExternalClassifier(predictions)
    raise ConfigurationError(
        f"unknown classifier {handle!r}; expected one of {', '.join(CLASSIFIER_HANDLES)}")


def classify(instance: TaggedInstance, model: Classifier) -> RelationPrediction:
    score = model.score(instance)
    return RelationPrediction(instance=instance,
                              positive=score >= DECISION_THRESHOLD, score=score)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(predictions: Sequence[RelationPrediction | bool],
             gold: Sequence[bool]) -> EvalMetrics:
    """Confusion-matrix metrics over aligned prediction/gold pairs.

    Zero-denominator precision, recall, and F1 are defined as 0 so the
    metrics are total.
    """
    if len(predictions) != len(gold):
        raise ValueError(f"{len(predictions)} predictions vs {len(gold)} gold labels")
    tp = fp = fn = tn = 0
    for pred, truth in zip(predictions, gold):
        positive = pred.positive if isinstance(pred, RelationPrediction) else bool(pred)
        if positive and truth:
            tp += 1
        elif positive:
            fp += 1
        elif truth:
            fn += 1
        else:
            tn += 1
    return EvalMetrics.from_counts(tp, fp, fn, tn)
