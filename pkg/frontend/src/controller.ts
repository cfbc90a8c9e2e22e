/**
 * Annotation session state machine, independent of the DOM.
 *
 * Invariants maintained here:
 *  - a sentence is only shown as saved after the server acknowledged it;
 *  - every 409 surfaces as a conflict banner carrying the server's record;
 *  - the cursor always points at a valid sentence index.
 */

import type { ApiClient } from "./api.js";
import { NetworkError } from "./api.js";
import { zoneForKey } from "./keymap.js";
import type { DocumentSummary, DocumentView, LabelRecord } from "./types.js";

export type SentenceStatus = "unlabeled" | "saving" | "saved";

export interface ConflictBanner {
  sentenceIdx: number;
  message: string;
  /** The newer record on the server, shown to the user before any retry. */
  serverLabel: string | null;
  serverRev: number;
}

export interface AnnotatorState {
  documents: DocumentSummary[];
  view: DocumentView | null;
  cursor: number;
  status: SentenceStatus[];
  conflict: ConflictBanner | null;
  /** Set when a request failed at the network level; labels are never lost silently. */
  retryMessage: string | null;
}

export class AnnotatorController {
  readonly state: AnnotatorState = {
    documents: [],
    view: null,
    cursor: 0,
    status: [],
    conflict: null,
    retryMessage: null,
  };

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: () => void = () => {},
  ) {}

  async refreshDocuments(): Promise<void> {
    this.state.documents = await this.api.listDocuments();
    this.onChange();
  }

  async openDocument(docId: string): Promise<void> {
    const view = await this.api.getDocument(docId);
    this.state.view = view;
    this.state.status = view.sentences.map((s) => (s.label ? "saved" : "unlabeled"));
    this.state.conflict = null;
    this.state.retryMessage = null;
    this.state.cursor = Math.max(0, view.sentences.findIndex((s) => !s.label));
    this.onChange();
  }

  /** Central keyboard entry point: digits 1..8 label, arrows move the cursor. */
  async handleKey(key: string): Promise<void> {
    if (!this.state.view) {
      return;
    }
    if (key === "ArrowDown" || key === "j") {
      this.moveCursor(1);
      return;
    }
    if (key === "ArrowUp" || key === "k") {
      this.moveCursor(-1);
      return;
    }
    const zone = zoneForKey(key);
    if (zone === null) {
      return; // closed key map: anything else is ignored
    }
    await this.labelCurrent(zone);
  }

  moveCursor(delta: number): void {
    const view = this.state.view;
    if (!view) {
      return;
    }
    const next = this.state.cursor + delta;
    if (next >= 0 && next < view.sentences.length) {
      this.state.cursor = next;
      this.onChange();
    }
  }

  async labelCurrent(zone: string): Promise<void> {
    const view = this.state.view;
    if (!view) {
      return;
    }
    const idx = this.state.cursor;
    const sentence = view.sentences[idx];
    this.state.conflict = null;
    this.state.retryMessage = null;
    this.state.status[idx] = "saving";
    this.onChange();

    let result;
    try {
      result = await this.api.submitLabel(view.doc_id, idx, zone, sentence.rev + 1);
    } catch (err) {
      // network failure: keep the sentence visibly unsaved and offer a retry
      this.state.status[idx] = sentence.label ? "saved" : "unlabeled";
      this.state.retryMessage =
        err instanceof NetworkError ? err.message : String(err);
      this.onChange();
      return;
    }

    if (result.ok) {
      this.applyAck(idx, result.record);
      this.advanceToNextUnlabeled(idx);
    } else if (result.status === 409 && "current" in result) {
      this.applyConflict(idx, result.error, result.current);
    } else {
      this.state.status[idx] = sentence.label ? "saved" : "unlabeled";
      this.state.retryMessage = result.error;
    }
    this.onChange();
  }

  private applyAck(idx: number, record: LabelRecord): void {
    const sentence = this.state.view!.sentences[idx];
    sentence.label = record.label;
    sentence.rev = record.rev;
    this.state.status[idx] = "saved";
  }

  /** Show the server's newer record and refresh rev; the user's view stays put. */
  private applyConflict(idx: number, message: string, current: LabelRecord | null): void {
    const sentence = this.state.view!.sentences[idx];
    if (current) {
      sentence.label = current.label;
      sentence.rev = current.rev;
      this.state.status[idx] = "saved";
    } else {
      this.state.status[idx] = sentence.label ? "saved" : "unlabeled";
    }
    this.state.conflict = {
      sentenceIdx: idx,
      message,
      serverLabel: current ? current.label : null,
      serverRev: current ? current.rev : 0,
    };
  }

  private advanceToNextUnlabeled(from: number): void {
    const n = this.state.view!.sentences.length;
    for (let step = 1; step <= n; step += 1) {
      const idx = (from + step) % n;
      if (this.state.status[idx] === "unlabeled") {
        this.state.cursor = idx;
        return;
      }
    }
    this.state.cursor = Math.min(from + 1, n - 1);
  }
}
