"""Relation-oriented inverted index: class pairs to evidence postings.

Each key is a (chemical class, protein class) pair; its posting list holds
one entry per distinct evidence sentence, sorted by (doc_id, sent_index).
Per-class partner tables rank related entities by co-mention count, which by
construction equals the posting-list length of the pair.

Persistence format (UTF-8, one file):
    <JSON document>\n
    sha256:<hex digest of the JSON bytes>\n
The JSON document is {"format_version": 1, "classes": [...], "partners":
{...}, "postings": [...], "manifest": {...}}. Loading verifies the checksum
and the format version before anything else.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

from .corpus import Corpus, EType
from .errors import (
    BipartitenessError,
    ChecksumError,
    DanglingReferenceError,
    IndexFormatError,
    UnknownClassError,
    VersionMismatchError,
)
from .normalization import ClassAssignment, EntityClass
from .relex import RelationPrediction

FORMAT_VERSION = 1


class RelationKey(NamedTuple):
    chem_class_id: int
    prot_class_id: int


@dataclass(frozen=True)
class Posting:
    doc_id: str
    sent_index: int
    sentence_text: str
    score: float


@dataclass(frozen=True)
class DocMeta:
    title: str
    source_url: str | None = None


@dataclass
class InvertedIndex:
    classes: list[EntityClass]
    postings: dict[RelationKey, list[Posting]]
    partners: dict[int, list[tuple[int, int]]]
    doc_meta: dict[str, DocMeta]
    fingerprint: str | None = field(default=None, compare=False)

    def class_of(self, class_id: int) -> EntityClass:
        if not 0 <= class_id < len(self.classes):
            raise UnknownClassError(class_id)
        return self.classes[class_id]


def build_index(corpus: Corpus, classes: Sequence[EntityClass],
                assignment: ClassAssignment,
                predictions: Sequence[RelationPrediction]) -> InvertedIndex:
    """Materialize the index from positively classified instances.

    Repeated mention pairs that resolve to the same classes in the same
    sentence collapse into a single posting carrying the maximal score, so
    surface variants are never double-counted.
    """
    best: dict[tuple[RelationKey, str, int], float] = {}
    for pred in predictions:
        if not pred.positive:
            continue
        inst = pred.instance
        chem_cid = assignment.get(inst.chem_mention_id)
        prot_cid = assignment.get(inst.prot_mention_id)
        if chem_cid is None or prot_cid is None:
            raise DanglingReferenceError(
                f"prediction references unassigned mention in pair {inst.pair_key}")
        if classes[chem_cid].etype is not EType.CHEMICAL:
            raise BipartitenessError(
                f"mention {inst.chem_mention_id!r} resolves to a non-Chemical class")
        if classes[prot_cid].etype is not EType.PROTEIN:
            raise BipartitenessError(
                f"mention {inst.prot_mention_id!r} resolves to a non-Protein class")
        if corpus.sentence(inst.doc_id, inst.sent_index) is None:
            raise DanglingReferenceError(
                f"prediction references missing sentence ({inst.doc_id!r}, {inst.sent_index})")
        key = (RelationKey(chem_cid, prot_cid), inst.doc_id, inst.sent_index)
        best[key] = max(best.get(key, 0.0), pred.score)

    postings: dict[RelationKey, list[Posting]] = {}
    for (key, doc_id, sent_index), score in best.items():
        sentence = corpus.sentence(doc_id, sent_index)
        postings.setdefault(key, []).append(
            Posting(doc_id, sent_index, sentence.text, score))
    for key in postings:
        postings[key].sort(key=lambda p: (p.doc_id, p.sent_index))

    canonical = {cls.class_id: cls.canonical for cls in classes}
    partners: dict[int, list[tuple[int, int]]] = {}
    for key, plist in postings.items():
        count = len(plist)
        partners.setdefault(key.chem_class_id, []).append((key.prot_class_id, count))
        partners.setdefault(key.prot_class_id, []).append((key.chem_class_id, count))
    for cid in partners:
        partners[cid].sort(key=lambda pc: (-pc[1], canonical[pc[0]]))

    doc_meta = {d.doc_id: DocMeta(d.title, d.source_url) for d in corpus.documents}
    return InvertedIndex(classes=list(classes), postings=postings,
                         partners=partners, doc_meta=doc_meta)


def related_entities(index: InvertedIndex, class_id: int) -> list[tuple[int, int]]:
    """Partner classes of ``class_id`` with co-mention counts, most first."""
    index.class_of(class_id)
    return list(index.partners.get(class_id, []))


def postings_for(index: InvertedIndex, key: RelationKey) -> list[Posting]:
    return list(index.postings.get(RelationKey(*key), []))


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def _to_document(index: InvertedIndex) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "classes": [
            {
                "class_id": cls.class_id,
                "etype": cls.etype.value,
                "canonical": cls.canonical,
                "surface_counts": cls.surface_counts,
                "external_ids": sorted(cls.external_ids),
            }
            for cls in index.classes
        ],
        "partners": {
            str(cid): [[pid, count] for pid, count in pairs]
            for cid, pairs in index.partners.items()
        },
        "postings": [
            {
                "chem_class_id": key.chem_class_id,
                "prot_class_id": key.prot_class_id,
                "evidence": [
                    {"doc_id": p.doc_id, "sent_index": p.sent_index,
                     "sentence_text": p.sentence_text, "score": p.score}
                    for p in plist
                ],
            }
            for key, plist in sorted(index.postings.items())
        ],
        "manifest": {
            doc_id: {"title": meta.title, "source_url": meta.source_url}
            for doc_id, meta in index.doc_meta.items()
        },
    }


def _serialize(index: InvertedIndex) -> tuple[str, str]:
    payload = json.dumps(_to_document(index), ensure_ascii=False, sort_keys=True, indent=1)
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    return payload, digest


def compute_fingerprint(index: InvertedIndex) -> str:
    if index.fingerprint is None:
        index.fingerprint = _serialize(index)[1]
    return index.fingerprint


def save_index(index: InvertedIndex, path: str | Path) -> str:
    """Write the index file and return its content checksum."""
    payload, digest = _serialize(index)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(payload)
        handle.write(f"\nsha256:{digest}\n")
    index.fingerprint = digest
    return digest


def load_index(path: str | Path) -> InvertedIndex:
    """Read an index file back, verifying checksum and format version."""
    text = Path(path).read_text(encoding="utf-8")
    payload, _, tail = text.rstrip("\n").rpartition("\n")
    if not tail.startswith("sha256:"):
        raise ChecksumError(f"{path}: missing checksum line (truncated file?)")
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    if digest != tail[len("sha256:"):]:
        raise ChecksumError(f"{path}: checksum mismatch")
    try:
        doc = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"{path}: invalid JSON ({exc})") from None
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{path}: format_version {version!r}, expected {FORMAT_VERSION}")
    try:
        classes = [
            EntityClass(
                class_id=c["class_id"], etype=EType(c["etype"]),
                surface_counts=dict(c["surface_counts"]),
                external_ids=frozenset(c["external_ids"]),
                canonical=c["canonical"],
            )
            for c in doc["classes"]
        ]
        classes.sort(key=lambda c: c.class_id)
        partners = {
            int(cid): [(int(pid), int(count)) for pid, count in pairs]
            for cid, pairs in doc["partners"].items()
        }
        postings = {
            RelationKey(entry["chem_class_id"], entry["prot_class_id"]): [
                Posting(p["doc_id"], p["sent_index"], p["sentence_text"], p["score"])
                for p in entry["evidence"]
            ]
            for entry in doc["postings"]
        }
        doc_meta = {
            doc_id: DocMeta(meta["title"], meta.get("source_url"))
            for doc_id, meta in doc["manifest"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise IndexFormatError(f"{path}: malformed index document ({exc!r})") from None
    return InvertedIndex(classes=classes, postings=postings, partners=partners,
                         doc_meta=doc_meta, fingerprint=digest)
