"""Corpus ingestion: sentence splitting, annotated-corpus files, and
ChemProt-style directories.

Two input formats are supported:

Annotated corpus (UTF-8 JSON Lines, one record per line):
    {"kind": "doc", "doc_id", "title", "body", "source_url"?}
    {"kind": "mention", "mention_id", "doc_id", "sent_index", "start",
     "end", "surface", "etype", "external_ids": [...]}
Mention offsets are Unicode scalar positions into the sentence text, where
sentences are derived from ``split_sentences`` so offsets stay consistent
with the bundled splitter. Sentence records are never stored.

ChemProt-style directory (three TSV files):
    *abstracts*.tsv   pmid <TAB> title <TAB> abstract
    *entities*.tsv    pmid <TAB> entity_id <TAB> type <TAB> start <TAB> end <TAB> text
    *relations*.tsv   pmid <TAB> cpr_group <TAB> eval_flag <TAB> name <TAB> Arg1:id <TAB> Arg2:id
Entity type is one of CHEMICAL, GENE-Y, GENE-N (the GENE variants both map
to Protein); entity offsets are scalar positions into the abstract text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, NamedTuple

from .errors import DanglingReferenceError, MalformedRowError, SchemaError


class EType(str, Enum):
    CHEMICAL = "Chemical"
    PROTEIN = "Protein"


class CprLabel(str, Enum):
    """Relation category of a gold chemical-protein pair."""

    CPR0 = "CPR:0"
    CPR1 = "CPR:1"
    CPR2 = "CPR:2"
    CPR3 = "CPR:3"
    CPR4 = "CPR:4"
    CPR5 = "CPR:5"
    CPR6 = "CPR:6"
    CPR7 = "CPR:7"
    CPR8 = "CPR:8"
    CPR9 = "CPR:9"
    CPR10 = "CPR:10"
    OTHER = "Other"

    @classmethod
    def parse(cls, text: str) -> "CprLabel":
        try:
            return cls(text)
        except ValueError:
            raise MalformedRowError(f"unknown relation group {text!r}") from None


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    body: str
    source_url: str | None = None


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    sent_index: int
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class EntityMention:
    mention_id: str
    doc_id: str
    sent_index: int
    start: int          # offset into the sentence text
    end: int
    surface: str
    etype: EType
    external_ids: frozenset[str] = frozenset()


@dataclass(frozen=True)
class GoldRelation:
    doc_id: str
    sent_index: int
    chem_mention_id: str
    prot_mention_id: str
    cpr: CprLabel


class AnnotatedCorpus(NamedTuple):
    documents: list[Document]
    sentences: list[Sentence]
    mentions: list[EntityMention]


@dataclass
class ChemprotSummary:
    relation_rows: int = 0
    relations_kept: int = 0
    dropped_cross_sentence: int = 0
    dropped_mentions: int = 0


class ChemprotCorpus(NamedTuple):
    documents: list[Document]
    mentions: list[EntityMention]
    relations: list[GoldRelation]
    summary: ChemprotSummary


@dataclass
class Corpus:
    """Documents plus their derived sentences, with id-based lookup."""

    documents: list[Document]
    sentences: list[Sentence]
    _docs: dict[str, Document] = field(init=False, repr=False)
    _sents: dict[tuple[str, int], Sentence] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._docs = {d.doc_id: d for d in self.documents}
        self._sents = {(s.doc_id, s.sent_index): s for s in self.sentences}

    def document(self, doc_id: str) -> Document | None:
        return self._docs.get(doc_id)

    def sentence(self, doc_id: str, sent_index: int) -> Sentence | None:
        return self._sents.get((doc_id, sent_index))


# ---------------------------------------------------------------------------
# Sentence splitting
# ---------------------------------------------------------------------------

# Terminators that never end a sentence, matched case-insensitively against
# the text up to and including the candidate period.
_ABBREVIATIONS = ("e.g.", "i.e.", "et al.", "fig.", "vs.", "approx.")

_TERMINATORS = ".!?"


def _is_boundary(body: str, i: int) -> bool:
    j = i + 1
    if j >= len(body) or not body[j].isspace():
        return False
    while j < len(body) and body[j].isspace():
        j += 1
    if j >= len(body) or not (body[j].isupper() or body[j].isdigit()):
        return False
    if body[i] == ".":
        head = body[: i + 1].casefold()
        if any(head.endswith(abbr) for abbr in _ABBREVIATIONS):
            return False
    return True


def split_sentences(body: str, doc_id: str = "") -> list[Sentence]:
    """Split abstract text into sentences with scalar offsets into ``body``.

    A boundary is a '.', '!' or '?' followed by whitespace and an uppercase
    letter or digit, unless the token ending at the period is a known
    abbreviation. Decimal points never qualify because they are not followed
    by whitespace. Sentences tile the non-whitespace content of the input.
    """
    sentences: list[Sentence] = []

    def emit(lo: int, hi: int) -> None:
        while lo < hi and body[lo].isspace():
            lo += 1
        while hi > lo and body[hi - 1].isspace():
            hi -= 1
        if lo < hi:
            sentences.append(Sentence(doc_id, len(sentences), lo, hi, body[lo:hi]))

    seg_start = 0
    for i, ch in enumerate(body):
        if ch in _TERMINATORS and _is_boundary(body, i):
            emit(seg_start, i + 1)
            seg_start = i + 1
    emit(seg_start, len(body))
    return sentences


# ---------------------------------------------------------------------------
# Annotated-corpus loader
# ---------------------------------------------------------------------------

def _req(record: dict, key: str, kind: type, line_no: int):
    value = record.get(key)
    if not isinstance(value, kind) or (kind is str and not value):
        raise SchemaError(f"line {line_no}: field {key!r} missing or invalid")
    return value


def load_annotated_corpus(path: str | Path) -> AnnotatedCorpus:
    """Load a JSON Lines annotated corpus and derive its sentences.

    Raises SchemaError with the offending line number for malformed records
    and DanglingReferenceError when a mention points at a document or
    sentence that does not exist.
    """
    docs: list[Document] = []
    raw_mentions: list[tuple[int, dict]] = []
    seen_docs: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"line {line_no}: invalid JSON ({exc})") from None
            if not isinstance(record, dict):
                raise SchemaError(f"line {line_no}: record is not an object")
            kind = record.get("kind")
            if kind == "doc":
                doc_id = _req(record, "doc_id", str, line_no)
                if doc_id in seen_docs:
                    raise SchemaError(f"line {line_no}: duplicate doc_id {doc_id!r}")
                seen_docs.add(doc_id)
                docs.append(Document(
                    doc_id=doc_id,
                    title=_req(record, "title", str, line_no),
                    body=_req(record, "body", str, line_no),
                    source_url=record.get("source_url"),
                ))
            elif kind == "mention":
                raw_mentions.append((line_no, record))
            else:
                raise SchemaError(f"line {line_no}: unknown record kind {kind!r}")

    docs.sort(key=lambda d: d.doc_id)
    sentences: list[Sentence] = []
    sent_lookup: dict[tuple[str, int], Sentence] = {}
    for doc in docs:
        for sent in split_sentences(doc.body, doc.doc_id):
            sentences.append(sent)
            sent_lookup[(doc.doc_id, sent.sent_index)] = sent

    mentions: list[EntityMention] = []
    seen_mentions: set[str] = set()
    for line_no, record in raw_mentions:
        mention_id = _req(record, "mention_id", str, line_no)
        if mention_id in seen_mentions:
            raise SchemaError(f"line {line_no}: duplicate mention_id {mention_id!r}")
        seen_mentions.add(mention_id)
        doc_id = _req(record, "doc_id", str, line_no)
        sent_index = record.get("sent_index")
        if not isinstance(sent_index, int) or sent_index < 0:
            raise SchemaError(f"line {line_no}: field 'sent_index' missing or invalid")
        if doc_id not in seen_docs:
            raise DanglingReferenceError(
                f"line {line_no}: mention {mention_id!r} references unknown doc_id {doc_id!r}")
        sent = sent_lookup.get((doc_id, sent_index))
        if sent is None:
            raise DanglingReferenceError(
                f"line {line_no}: mention {mention_id!r} references missing sentence "
                f"{sent_index} of {doc_id!r}")
        start, end = record.get("start"), record.get("end")
        if not (isinstance(start, int) and isinstance(end, int) and 0 <= start < end <= len(sent.text)):
            raise SchemaError(f"line {line_no}: span [{start},{end}) outside sentence")
        surface = _req(record, "surface", str, line_no)
        if sent.text[start:end] != surface:
            raise SchemaError(
                f"line {line_no}: surface {surface!r} does not match sentence slice "
                f"{sent.text[start:end]!r}")
        try:
            etype = EType(record.get("etype"))
        except ValueError:
            raise SchemaError(f"line {line_no}: invalid etype {record.get('etype')!r}") from None
        ids = record.get("external_ids", [])
        if not isinstance(ids, list) or not all(isinstance(x, str) for x in ids):
            raise SchemaError(f"line {line_no}: external_ids must be a list of strings")
        mentions.append(EntityMention(
            mention_id=mention_id, doc_id=doc_id, sent_index=sent_index,
            start=start, end=end, surface=surface, etype=etype,
            external_ids=frozenset(ids),
        ))
    return AnnotatedCorpus(docs, sentences, mentions)


# ---------------------------------------------------------------------------
# ChemProt-style loader
# ---------------------------------------------------------------------------

def _find_tsv(directory: Path, stem: str) -> Path:
    matches = sorted(directory.glob(f"*{stem}*.tsv"))
    if not matches:
        raise FileNotFoundError(f"no *{stem}*.tsv file in {directory}")
    if len(matches) > 1:
        raise MalformedRowError(f"ambiguous {stem} files in {directory}: {matches}")
    return matches[0]


def _read_tsv(path: Path, n_columns: int):
    with open(path, encoding="utf-8") as handle:
        for row_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            cells = line.split("\t")
            if len(cells) != n_columns:
                raise MalformedRowError(
                    f"{path.name}:{row_no}: expected {n_columns} columns, got {len(cells)}")
            yield row_no, cells


_CHEMPROT_TYPES = {"CHEMICAL": EType.CHEMICAL, "GENE-Y": EType.PROTEIN, "GENE-N": EType.PROTEIN}


def parse_chemprot(directory: str | Path) -> ChemprotCorpus:
    """Parse a ChemProt-style three-file directory.

    Gold relations whose mention pair does not land in a single sentence are
    dropped and counted in the returned summary rather than raising; the
    downstream pipeline only handles co-sentential pairs.
    """
    directory = Path(directory)
    abstracts = _find_tsv(directory, "abstracts")
    entities = _find_tsv(directory, "entities")
    relations = _find_tsv(directory, "relations")

    documents: list[Document] = []
    doc_by_id: dict[str, Document] = {}
    sentences_by_doc: dict[str, list[Sentence]] = {}
    for row_no, (pmid, title, body) in _read_tsv(abstracts, 3):
        if not pmid or not body:
            raise MalformedRowError(f"{abstracts.name}:{row_no}: empty pmid or abstract")
        doc = Document(doc_id=pmid, title=title, body=body)
        documents.append(doc)
        doc_by_id[pmid] = doc
        sentences_by_doc[pmid] = split_sentences(body, pmid)
    documents.sort(key=lambda d: d.doc_id)

    summary = ChemprotSummary()
    mentions: list[EntityMention] = []
    by_id: dict[str, EntityMention] = {}
    dropped_ids: set[str] = set()
    for row_no, (pmid, tid, etype_text, start_text, end_text, text) in _read_tsv(entities, 6):
        if pmid not in sentences_by_doc:
            raise DanglingReferenceError(
                f"{entities.name}:{row_no}: unknown abstract id {pmid!r}")
        etype = _CHEMPROT_TYPES.get(etype_text)
        if etype is None:
            raise MalformedRowError(f"{entities.name}:{row_no}: unknown entity type {etype_text!r}")
        try:
            start, end = int(start_text), int(end_text)
        except ValueError:
            raise MalformedRowError(f"{entities.name}:{row_no}: non-integer span") from None
        doc = doc_by_id[pmid]
        if not (0 <= start < end <= len(doc.body)):
            raise MalformedRowError(
                f"{entities.name}:{row_no}: span [{start},{end}) outside abstract of length "
                f"{len(doc.body)}")
        if doc.body[start:end] != text:
            raise MalformedRowError(
                f"{entities.name}:{row_no}: text {text!r} does not match abstract slice")
        sent = next((s for s in sentences_by_doc[pmid] if s.start <= start and end <= s.end), None)
        if sent is None:
            summary.dropped_mentions += 1
            dropped_ids.add(f"{pmid}:{tid}")
            continue
        mention = EntityMention(
            mention_id=f"{pmid}:{tid}", doc_id=pmid, sent_index=sent.sent_index,
            start=start - sent.start, end=end - sent.start, surface=text,
            etype=etype, external_ids=frozenset(),
        )
        if mention.mention_id in by_id:
            raise MalformedRowError(f"{entities.name}:{row_no}: duplicate entity id {tid!r}")
        by_id[mention.mention_id] = mention
        mentions.append(mention)

    gold: list[GoldRelation] = []
    for row_no, (pmid, cpr_text, _flag, _name, arg1, arg2) in _read_tsv(relations, 6):
        summary.relation_rows += 1
        cpr = CprLabel.parse(cpr_text)
        refs = []
        for arg in (arg1, arg2):
            prefix, _, tid = arg.partition(":")
            if prefix not in ("Arg1", "Arg2") or not tid:
                raise MalformedRowError(f"{relations.name}:{row_no}: malformed argument {arg!r}")
            refs.append(f"{pmid}:{tid}")
        resolved = []
        for ref in refs:
            mention = by_id.get(ref)
            if mention is None:
                if ref in dropped_ids:
                    resolved = None
                    break
                raise DanglingReferenceError(
                    f"{relations.name}:{row_no}: unknown entity reference {ref!r}")
            resolved.append(mention)
        if resolved is None:
            summary.dropped_cross_sentence += 1
            continue
        chems = [m for m in resolved if m.etype is EType.CHEMICAL]
        prots = [m for m in resolved if m.etype is EType.PROTEIN]
        if len(chems) != 1 or len(prots) != 1:
            raise MalformedRowError(
                f"{relations.name}:{row_no}: expected one chemical and one protein argument")
        chem, prot = chems[0], prots[0]
        if chem.sent_index != prot.sent_index:
            summary.dropped_cross_sentence += 1
            continue
        summary.relations_kept += 1
        gold.append(GoldRelation(
            doc_id=pmid, sent_index=chem.sent_index,
            chem_mention_id=chem.mention_id, prot_mention_id=prot.mention_id, cpr=cpr,
        ))
    return ChemprotCorpus(documents, mentions, gold, summary)


# ---------------------------------------------------------------------------
# Labels and deduplication
# ---------------------------------------------------------------------------

def binary_label(cpr: CprLabel) -> bool:
    """Collapse the relation category to the binary related/unrelated scheme.

    CPR:0 through CPR:9 are related; CPR:10 (explicitly stated non-relation)
    and Other (no relation information) are not.
    """
    return cpr not in (CprLabel.CPR10, CprLabel.OTHER)


def dedup_relations(relations: Iterable[GoldRelation],
                    mentions: Iterable[EntityMention]) -> list[GoldRelation]:
    """Drop repeated gold relations, keeping the first occurrence.

    Two relations are duplicates when they share document, sentence, the
    chemical's surface and span, the protein's surface and span, and the
    relation category; annotations that differ only in mention ids collapse.
    """
    by_id = {m.mention_id: m for m in mentions}
    seen: set[tuple] = set()
    kept: list[GoldRelation] = []
    for rel in relations:
        try:
            chem = by_id[rel.chem_mention_id]
            prot = by_id[rel.prot_mention_id]
        except KeyError as exc:
            raise DanglingReferenceError(f"relation references unknown mention {exc}") from None
        key = (rel.doc_id, rel.sent_index,
               chem.surface, chem.start, chem.end,
               prot.surface, prot.start, prot.end, rel.cpr)
        if key in seen:
            continue
        seen.add(key)
        kept.append(rel)
    return kept
