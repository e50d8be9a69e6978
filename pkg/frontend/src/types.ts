// Payload shapes of the search service API (GET /api/search).

export interface MatchedEntity {
  class_id: number;
  canonical: string;
  external_ids: string[];
  similarity: number;
}

export interface EvidenceItem {
  doc_id: string;
  title: string;
  source_url: string | null;
  sentence_text: string;
}

export interface RelatedEntity {
  class_id: number;
  canonical: string;
  /** total number of evidence sentences for the pair (also the page total) */
  co_mention_count: number;
  evidence: EvidenceItem[];
}

export interface SimilarEntity {
  class_id: number;
  canonical: string;
  score: number;
}

export interface SearchResponse {
  query: string;
  matched: MatchedEntity | null;
  related: RelatedEntity[];
  similar: SimilarEntity[];
}

/** Server page size for per-partner evidence lists. */
export const EVIDENCE_PAGE_SIZE = 20;

/**
 * The server response plus UI state. Extra evidence fetched through
 * pagination is kept per partner and appended at render time; the server
 * payload itself is never mutated or reordered.
 */
export interface SearchViewModel {
  loading: boolean;
  error: string | null;
  response: SearchResponse | null;
  extraEvidence: Map<number, EvidenceItem[]>;
}
