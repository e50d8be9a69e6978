// DOM construction and rendering. Rendering is a pure function of the view
// model: the four result panels mirror the payload exactly, in server order,
// with no client-side aggregation or re-sorting.

import type { RelatedEntity, SearchViewModel } from "./types.js";

export function createLayout(): HTMLElement {
  const root = document.createElement("div");
  root.className = "app";
  root.innerHTML = `
    <header class="topbar">
      <h1>relsearch</h1>
      <input id="search-input" type="search" autocomplete="off"
             placeholder="Search a chemical or protein (name or ID)..." />
    </header>
    <div id="error-banner" hidden>
      <span id="error-text"></span>
      <button id="retry-button" type="button">Retry</button>
    </div>
    <p id="empty-state" hidden>No related entities found.</p>
    <main>
      <section id="panel-query" class="panel" hidden>
        <h2>Matched entity</h2>
        <div id="matched-card"></div>
      </section>
      <section id="panel-similar" class="panel" hidden>
        <h2>Similar biomolecules</h2>
        <ul id="similar-list"></ul>
      </section>
      <section id="panel-related" class="panel" hidden>
        <h2>Related biomolecules</h2>
        <ul id="related-list"></ul>
      </section>
      <section id="panel-evidence" class="panel" hidden>
        <h2>Evidence sentences</h2>
        <div id="evidence-groups"></div>
      </section>
    </main>`;
  return root;
}

function el<T extends HTMLElement>(root: ParentNode, id: string): T {
  const node = root.querySelector(`#${id}`);
  if (!node) throw new Error(`layout is missing #${id}`);
  return node as T;
}

function show(node: HTMLElement, visible: boolean): void {
  node.hidden = !visible;
}

export function render(root: ParentNode, vm: SearchViewModel): void {
  const banner = el<HTMLDivElement>(root, "error-banner");
  const emptyState = el<HTMLParagraphElement>(root, "empty-state");
  const panels = {
    query: el<HTMLElement>(root, "panel-query"),
    similar: el<HTMLElement>(root, "panel-similar"),
    related: el<HTMLElement>(root, "panel-related"),
    evidence: el<HTMLElement>(root, "panel-evidence"),
  };

  el<HTMLInputElement>(root, "search-input").classList.toggle("loading", vm.loading);

  if (vm.error !== null) {
    el<HTMLSpanElement>(root, "error-text").textContent = vm.error;
    show(banner, true);
    show(emptyState, false);
    Object.values(panels).forEach((p) => show(p, false));
    return;
  }
  show(banner, false);

  const response = vm.response;
  if (response === null) {
    show(emptyState, false);
    Object.values(panels).forEach((p) => show(p, false));
    return;
  }
  if (response.matched === null) {
    show(emptyState, true);
    Object.values(panels).forEach((p) => show(p, false));
    return;
  }
  show(emptyState, false);

  // panel 1: the query's entity with its unique IDs
  const card = el<HTMLDivElement>(root, "matched-card");
  card.replaceChildren();
  const name = document.createElement("p");
  name.className = "matched-name";
  name.textContent = `${response.matched.canonical} ` +
    `(similarity ${response.matched.similarity.toFixed(3)})`;
  card.appendChild(name);
  const ids = document.createElement("ul");
  ids.className = "id-list";
  for (const externalId of response.matched.external_ids) {
    const item = document.createElement("li");
    item.textContent = externalId;
    ids.appendChild(item);
  }
  card.appendChild(ids);
  show(panels.query, true);

  // panel 2: contextually similar biomolecules of the same type
  const similarList = el<HTMLUListElement>(root, "similar-list");
  similarList.replaceChildren();
  for (const similar of response.similar) {
    const item = document.createElement("li");
    const link = document.createElement("button");
    link.type = "button";
    link.className = "similar-entity";
    link.dataset.canonical = similar.canonical;
    link.textContent = similar.canonical;
    const score = document.createElement("span");
    score.className = "score";
    score.textContent = similar.score.toFixed(3);
    item.append(link, score);
    similarList.appendChild(item);
  }
  show(panels.similar, response.similar.length > 0);

  // panel 3: related biomolecules ranked by co-mention count
  const relatedList = el<HTMLUListElement>(root, "related-list");
  relatedList.replaceChildren();
  for (const related of response.related) {
    const item = document.createElement("li");
    const link = document.createElement("button");
    link.type = "button";
    link.className = "partner-link";
    link.dataset.canonical = related.canonical;
    link.textContent = related.canonical;
    const count = document.createElement("span");
    count.className = "count";
    count.textContent = String(related.co_mention_count);
    item.append(link, count);
    relatedList.appendChild(item);
  }
  show(panels.related, true);

  // panel 4: the sentences evidencing each relation, grouped per partner
  const groups = el<HTMLDivElement>(root, "evidence-groups");
  groups.replaceChildren();
  for (const related of response.related) {
    groups.appendChild(renderEvidenceGroup(related, vm));
  }
  show(panels.evidence, true);
}

function renderEvidenceGroup(related: RelatedEntity, vm: SearchViewModel): HTMLElement {
  const section = document.createElement("section");
  section.className = "evidence-group";
  section.dataset.classId = String(related.class_id);

  const heading = document.createElement("h3");
  heading.textContent = `${related.canonical} (${related.co_mention_count})`;
  section.appendChild(heading);

  const rows = document.createElement("ul");
  const shown = [...related.evidence, ...(vm.extraEvidence.get(related.class_id) ?? [])];
  for (const item of shown) {
    const row = document.createElement("li");
    row.className = "evidence-row";
    const link = document.createElement("a");
    link.textContent = `[${item.doc_id}] ${item.title}`;
    if (item.source_url) {
      link.href = item.source_url;
      link.target = "_blank";
      link.rel = "noopener";
    }
    const sentence = document.createElement("p");
    sentence.textContent = item.sentence_text;
    row.append(link, sentence);
    rows.appendChild(row);
  }
  section.appendChild(rows);

  if (shown.length < related.co_mention_count) {
    const more = document.createElement("button");
    more.type = "button";
    more.className = "more-evidence";
    more.dataset.classId = String(related.class_id);
    more.dataset.offset = String(shown.length);
    more.textContent = `More (${shown.length} of ${related.co_mention_count})`;
    section.appendChild(more);
  }
  return section;
}
