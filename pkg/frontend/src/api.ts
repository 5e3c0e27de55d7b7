// Typed client for the recommender service. Every call round-trips and
// resolves to the parsed body; non-2xx responses reject with the service's
// structured error so the UI can surface it inline.

import type {
  ApiErrorBody,
  DatasetSummary,
  Recommendation,
  SessionCreated,
  SessionSummary,
} from "./types.js";

export class ApiRequestError extends Error {
  readonly body: ApiErrorBody;

  constructor(body: ApiErrorBody) {
    super(`${body.code}: ${body.detail}`);
    this.body = body;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { accept: "application/json" } };
    if (body !== undefined) {
      init.headers = { ...init.headers, "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(`${this.base}${path}`, init);
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiRequestError(payload as ApiErrorBody);
    }
    return payload as T;
  }

  listDatasets(): Promise<DatasetSummary[]> {
    return this.request("GET", "/v1/datasets");
  }

  getDataset(datasetId: string): Promise<DatasetSummary> {
    return this.request("GET", `/v1/datasets/${encodeURIComponent(datasetId)}`);
  }

  createSession(datasetId: string): Promise<SessionCreated> {
    return this.request("POST", "/v1/sessions", { dataset_id: datasetId });
  }

  postObservation(
    sessionId: string,
    symptom: string,
    state: "present" | "absent",
    replace = false,
  ): Promise<SessionSummary> {
    return this.request(
      "POST",
      `/v1/sessions/${encodeURIComponent(sessionId)}/observations`,
      { symptom, state, replace },
    );
  }

  deleteObservation(sessionId: string, symptom: string): Promise<SessionSummary> {
    return this.request(
      "DELETE",
      `/v1/sessions/${encodeURIComponent(sessionId)}/observations/${encodeURIComponent(symptom)}`,
    );
  }

  getRecommendation(sessionId: string): Promise<Recommendation> {
    return this.request("GET", `/v1/sessions/${encodeURIComponent(sessionId)}/recommendation`);
  }
}
