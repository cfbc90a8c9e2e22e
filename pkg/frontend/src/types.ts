/** Wire types for the annotation service HTTP/JSON API. */

export interface DocumentSummary {
  doc_id: string;
  source: string;
  n_sentences: number;
  n_labeled_by_annotator: number;
}

export interface SentenceView {
  index: number;
  text: string;
  /** Zone code, or null when this annotator has not labeled the sentence. */
  label: string | null;
  /** Last acknowledged revision; 0 when unlabeled. */
  rev: number;
}

export interface DocumentView {
  doc_id: string;
  source: string;
  sentences: SentenceView[];
}

export interface LabelRecord {
  doc_id: string;
  sentence_idx: number;
  annotator: string;
  label: string;
  rev: number;
  ts: string;
}

export interface GuidelineEntry {
  code: string;
  name: string;
  shortcut: number;
  definition: string;
  example: string;
}

export interface Guidelines {
  classes: GuidelineEntry[];
}

export interface AgreementReport {
  annotators: string[];
  n_items: number;
  fleiss: number;
  pairwise: Record<string, number>;
  /** Zone code -> kappa, or null when the zone was never used. */
  per_class: Record<string, number | null>;
  per_source: Record<string, number | null>;
}

export interface InsufficientOverlap {
  insufficient_overlap: true;
  reason: string;
}

export type AgreementResponse = AgreementReport | InsufficientOverlap;

export interface FleissResponse {
  fleiss?: number;
  n_items?: number;
  n_annotators?: number;
  insufficient_overlap?: true;
  reason?: string;
}

export type SubmitResult =
  | { ok: true; record: LabelRecord }
  | { ok: false; status: 409; error: string; current: LabelRecord | null }
  | { ok: false; status: number; error: string };

export function isInsufficient(r: AgreementResponse): r is InsufficientOverlap {
  return (r as InsufficientOverlap).insufficient_overlap === true;
}
