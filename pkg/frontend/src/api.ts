// Fetch wrapper for the search service with per-key request cancellation:
// issuing a request under a key aborts the previous in-flight request with
// the same key, so stale responses can never overwrite newer state.

import type { SearchResponse } from "./types.js";

export interface SearchOptions {
  k?: number;
  minSimilarity?: number;
  offset?: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  private pending = new Map<string, AbortController>();

  constructor(private baseUrl: string = "") {}

  async search(query: string, options: SearchOptions = {},
               key: string = "search"): Promise<SearchResponse> {
    this.pending.get(key)?.abort();
    const controller = new AbortController();
    this.pending.set(key, controller);

    const params = new URLSearchParams({ q: query });
    if (options.k !== undefined) params.set("k", String(options.k));
    if (options.minSimilarity !== undefined) {
      params.set("min_similarity", String(options.minSimilarity));
    }
    if (options.offset !== undefined) params.set("offset", String(options.offset));

    try {
      const response = await fetch(`${this.baseUrl}/api/search?${params.toString()}`, {
        signal: controller.signal,
      });
      if (!response.ok) {
        let detail = `request failed with status ${response.status}`;
        try {
          const body = await response.json();
          if (body && typeof body.detail === "string") detail = body.detail;
        } catch {
          // non-JSON error body; keep the status message
        }
        throw new ApiError(response.status, detail);
      }
      return (await response.json()) as SearchResponse;
    } finally {
      if (this.pending.get(key) === controller) this.pending.delete(key);
    }
  }

  cancelAll(): void {
    for (const controller of this.pending.values()) controller.abort();
    this.pending.clear();
  }
}

export function isAbortError(error: unknown): boolean {
  return error instanceof DOMException && error.name === "AbortError";
}
