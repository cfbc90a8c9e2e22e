/** DOM wiring: connects the controller, panels, and keyboard to the page. */

import { ApiClient } from "./api.js";
import { AnnotatorController } from "./controller.js";
import { formatProgress } from "./format.js";
import { renderAgreementPanel, renderGuidelinePanel } from "./panels.js";
import type { Guidelines } from "./types.js";

const GUIDELINE_CACHE_KEY = "zoner-guidelines";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

function annotatorName(): string {
  const stored = window.localStorage.getItem("zoner-annotator");
  if (stored) {
    return stored;
  }
  const name = window.prompt("Annotator name?", "anonymous") || "anonymous";
  window.localStorage.setItem("zoner-annotator", name);
  return name;
}

function render(controller: AnnotatorController): void {
  const { documents, view, cursor, status, conflict, retryMessage } = controller.state;

  const queue = el("doc-queue");
  queue.innerHTML = "";
  for (const doc of documents) {
    const item = document.createElement("li");
    item.textContent =
      `${doc.doc_id} (${doc.source}) ` +
      formatProgress(doc.n_labeled_by_annotator, doc.n_sentences);
    item.dataset.docId = doc.doc_id;
    if (view && doc.doc_id === view.doc_id) {
      item.classList.add("active");
    }
    item.addEventListener("click", () => {
      void controller.openDocument(doc.doc_id);
    });
    queue.appendChild(item);
  }

  const list = el("sentences");
  list.innerHTML = "";
  if (view) {
    el("doc-title").textContent = `${view.doc_id} (${view.source})`;
    view.sentences.forEach((sentence, idx) => {
      const row = document.createElement("li");
      row.className = `sentence ${status[idx]}`;
      if (idx === cursor) {
        row.classList.add("cursor");
      }
      const badge = document.createElement("span");
      badge.className = "badge";
      badge.textContent = sentence.label ?? "·";
      if (status[idx] === "saving") {
        badge.textContent = "…"; // not saved until the server acknowledges
      }
      const text = document.createElement("span");
      text.textContent = sentence.text;
      row.append(badge, text);
      row.addEventListener("click", () => {
        controller.state.cursor = idx;
        render(controller);
      });
      list.appendChild(row);
    });
    const labeled = status.filter((s) => s === "saved").length;
    el("progress").textContent = formatProgress(labeled, status.length);
  }

  const conflictBanner = el("conflict-banner");
  if (conflict) {
    conflictBanner.hidden = false;
    conflictBanner.textContent =
      `Conflict on sentence ${conflict.sentenceIdx + 1}: ${conflict.message}. ` +
      `Server has ${conflict.serverLabel ?? "no label"} (rev ${conflict.serverRev}). ` +
      "Press a digit to overwrite.";
  } else {
    conflictBanner.hidden = true;
  }

  const retryBanner = el("retry-banner");
  retryBanner.hidden = retryMessage === null;
  if (retryMessage !== null) {
    retryBanner.textContent = `Not saved: ${retryMessage} — press the key again to retry.`;
  }
}

async function loadGuidelines(api: ApiClient): Promise<void> {
  const panel = el("guidelines");
  try {
    const guidelines = await api.getGuidelines();
    window.localStorage.setItem(GUIDELINE_CACHE_KEY, JSON.stringify(guidelines));
    panel.innerHTML = renderGuidelinePanel(guidelines);
  } catch {
    const cached = window.localStorage.getItem(GUIDELINE_CACHE_KEY);
    if (cached) {
      panel.innerHTML = renderGuidelinePanel(JSON.parse(cached) as Guidelines);
    } else {
      panel.textContent = "guidelines unavailable";
    }
  }
}

async function refreshAgreement(api: ApiClient): Promise<void> {
  const panel = el("agreement");
  try {
    const [report, fleiss] = await Promise.all([api.getAgreement(), api.getFleiss()]);
    panel.innerHTML = renderAgreementPanel(report, fleiss);
  } catch {
    panel.textContent = "agreement unavailable";
  }
}

export function start(): void {
  const api = new ApiClient(annotatorName());
  const controller = new AnnotatorController(api, () => render(controller));

  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLInputElement) {
      return;
    }
    void controller.handleKey(event.key).then(() => {
      void controller.refreshDocuments();
      void refreshAgreement(api);
    });
  });

  el("agreement-refresh").addEventListener("click", () => {
    void refreshAgreement(api);
  });

  void controller.refreshDocuments().then(() => {
    const first = controller.state.documents[0];
    if (first) {
      void controller.openDocument(first.doc_id);
    }
  });
  void loadGuidelines(api);
  void refreshAgreement(api);
}

start();
