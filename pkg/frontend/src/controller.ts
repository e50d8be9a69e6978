// Search interaction loop: debounced query-as-you-type, one in-flight search
// at a time (superseded requests are aborted), per-partner evidence
// pagination, and the explore-by-click behavior on similar entities and
// partners.

import { ApiClient, isAbortError } from "./api.js";
import { render } from "./view.js";
import type { EvidenceItem, SearchViewModel } from "./types.js";

export const DEBOUNCE_MS = 300;
export const MIN_QUERY_LENGTH = 2;

export class SearchController {
  private vm: SearchViewModel = {
    loading: false,
    error: null,
    response: null,
    extraEvidence: new Map<number, EvidenceItem[]>(),
  };
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;
  private lastQuery = "";

  constructor(private root: HTMLElement, private client: ApiClient,
              private debounceMs: number = DEBOUNCE_MS) {
    this.input.addEventListener("input", () => this.onInput());
    this.root.addEventListener("click", (event) => this.onClick(event));
    render(this.root, this.vm);
  }

  private get input(): HTMLInputElement {
    return this.root.querySelector("#search-input") as HTMLInputElement;
  }

  private onInput(): void {
    const query = this.input.value.trim();
    if (this.debounceTimer !== null) clearTimeout(this.debounceTimer);
    if (query.length < MIN_QUERY_LENGTH) return;
    this.debounceTimer = setTimeout(() => {
      this.debounceTimer = null;
      void this.search(query);
    }, this.debounceMs);
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement;
    if (target.matches(".similar-entity, .partner-link")) {
      const canonical = target.dataset.canonical ?? "";
      this.input.value = canonical;
      void this.search(canonical);
    } else if (target.matches("#retry-button")) {
      if (this.lastQuery) void this.search(this.lastQuery);
    } else if (target.matches(".more-evidence")) {
      const classId = Number(target.dataset.classId);
      const offset = Number(target.dataset.offset);
      void this.loadMore(classId, offset);
    }
  }

  async search(query: string): Promise<void> {
    this.lastQuery = query;
    this.vm.loading = true;
    render(this.root, this.vm);
    try {
      const response = await this.client.search(query, {}, "search");
      this.vm.response = response;
      this.vm.error = null;
      this.vm.extraEvidence = new Map();
    } catch (error) {
      if (isAbortError(error)) return; // superseded by a newer request
      this.vm.error = error instanceof Error ? error.message : String(error);
    } finally {
      this.vm.loading = false;
    }
    render(this.root, this.vm);
  }

  async loadMore(classId: number, offset: number): Promise<void> {
    try {
      const response = await this.client.search(
        this.lastQuery, { offset }, `more-${classId}`);
      const partner = response.related.find((r) => r.class_id === classId);
      if (!partner) return;
      const extra = this.vm.extraEvidence.get(classId) ?? [];
      this.vm.extraEvidence.set(classId, [...extra, ...partner.evidence]);
    } catch (error) {
      if (isAbortError(error)) return;
      this.vm.error = error instanceof Error ? error.message : String(error);
    }
    render(this.root, this.vm);
  }

  /** Snapshot for tests; the view model is otherwise private. */
  get viewModel(): SearchViewModel {
    return this.vm;
  }
}
