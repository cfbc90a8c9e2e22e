/** Typed client for the annotation service; every request carries X-Annotator. */

import type {
  AgreementResponse,
  DocumentSummary,
  DocumentView,
  FleissResponse,
  Guidelines,
  LabelRecord,
  SubmitResult,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class NetworkError extends Error {}

export class ApiClient {
  constructor(
    public readonly annotator: string,
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init: RequestInit = {}): Promise<Response> {
    const headers = { "X-Annotator": this.annotator, ...(init.headers ?? {}) };
    try {
      return await this.fetchImpl(this.baseUrl + path, { ...init, headers });
    } catch (err) {
      throw new NetworkError(`request to ${path} failed: ${String(err)}`);
    }
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.request(path);
    if (!resp.ok) {
      throw new NetworkError(`GET ${path} returned ${resp.status}`);
    }
    return (await resp.json()) as T;
  }

  async listDocuments(): Promise<DocumentSummary[]> {
    const body = await this.getJson<{ documents: DocumentSummary[] }>("/api/docs");
    return body.documents;
  }

  getDocument(docId: string): Promise<DocumentView> {
    return this.getJson<DocumentView>(`/api/docs/${encodeURIComponent(docId)}`);
  }

  async submitLabel(
    docId: string,
    sentenceIdx: number,
    label: string,
    rev: number,
  ): Promise<SubmitResult> {
    const resp = await this.request(`/api/docs/${encodeURIComponent(docId)}/labels`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ sentence_idx: sentenceIdx, label, rev }),
    });
    if (resp.ok) {
      return { ok: true, record: (await resp.json()) as LabelRecord };
    }
    const body = (await resp.json()) as { error: string; current?: LabelRecord | null };
    if (resp.status === 409) {
      return { ok: false, status: 409, error: body.error, current: body.current ?? null };
    }
    return { ok: false, status: resp.status, error: body.error };
  }

  getAgreement(): Promise<AgreementResponse> {
    return this.getJson<AgreementResponse>("/api/agreement");
  }

  getFleiss(): Promise<FleissResponse> {
    return this.getJson<FleissResponse>("/api/agreement/fleiss");
  }

  getGuidelines(): Promise<Guidelines> {
    return this.getJson<Guidelines>("/api/guidelines");
  }

  async getExport(): Promise<string> {
    const resp = await this.request("/api/export");
    if (!resp.ok) {
      throw new NetworkError(`GET /api/export returned ${resp.status}`);
    }
    return resp.text();
  }
}
