"""Pydantic request/response models for the HTTP API and the one-shot CLI
query output (the two emit exactly the same JSON)."""

from __future__ import annotations

from pydantic import BaseModel


class MatchedEntity(BaseModel):
    class_id: int
    canonical: str
    external_ids: list[str]
    similarity: float


class EvidenceItem(BaseModel):
    doc_id: str
    title: str
    source_url: str | None = None
    sentence_text: str


class RelatedEntity(BaseModel):
    class_id: int
    canonical: str
    co_mention_count: int          # total evidence count; also the page total
    evidence: list[EvidenceItem]   # window of at most the page size


class SimilarEntity(BaseModel):
    class_id: int
    canonical: str
    score: float


class SearchResponse(BaseModel):
    query: str
    matched: MatchedEntity | None = None
    related: list[RelatedEntity] = []
    similar: list[SimilarEntity] = []


class EntityCard(BaseModel):
    class_id: int
    etype: str
    canonical: str
    surfaces: dict[str, int]
    external_ids: list[str]
    degree: int


class HealthResponse(BaseModel):
    status: str
    index_fingerprint: str
    classes: int
    relation_keys: int


class ErrorBody(BaseModel):
    error: str
    detail: str
