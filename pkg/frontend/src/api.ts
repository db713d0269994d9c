/** Thin HTTP client for the session service; every method is one endpoint. */

import type {
  EulerView,
  FrameDoc,
  KeyViewDoc,
  ModelDoc,
  PartViewDoc,
  SessionInfo,
  SolveDiagnostics,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Non-2xx response decoded from the service's {error, detail} body. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly kind: string,
    detail: string,
  ) {
    super(`${kind}: ${detail}`);
    this.name = "ServiceError";
  }
}

async function decode<T>(resp: Response): Promise<T> {
  if (resp.ok) {
    return (await resp.json()) as T;
  }
  let kind = `HTTP ${resp.status}`;
  let detail = resp.statusText;
  try {
    const body = (await resp.json()) as { error?: string; detail?: string };
    kind = body.error ?? kind;
    detail = body.detail ?? detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ServiceError(resp.status, kind, detail);
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "http://127.0.0.1:8520",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => decode<T>(r));
  }

  health(): Promise<{ status: string; sessions: number }> {
    return this.fetchFn(this.baseUrl + "/health").then((r) => decode(r));
  }

  createSession(model: ModelDoc): Promise<SessionInfo> {
    return this.post("/session", model);
  }

  getModel(sessionId: string): Promise<ModelDoc> {
    return this.fetchFn(`${this.baseUrl}/session/${sessionId}/model`).then(
      (r) => decode<ModelDoc>(r),
    );
  }

  addKeyView(
    sessionId: string,
    keyView: KeyViewDoc,
  ): Promise<{ key_view_count: number }> {
    return this.post(`/session/${sessionId}/keyview`, keyView);
  }

  deleteLatestKeyView(
    sessionId: string,
  ): Promise<{ key_view_count: number }> {
    return this.fetchFn(
      `${this.baseUrl}/session/${sessionId}/keyview/latest`,
      { method: "DELETE" },
    ).then((r) => decode(r));
  }

  editPart(
    sessionId: string,
    partId: string,
    keyViewIndex: number,
    record: PartViewDoc,
  ): Promise<{ ok: boolean }> {
    return this.fetchFn(
      `${this.baseUrl}/session/${sessionId}/part/${encodeURIComponent(
        partId,
      )}/keyview/${keyViewIndex}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(record),
      },
    ).then((r) => decode(r));
  }

  solve(sessionId: string): Promise<SolveDiagnostics> {
    return this.post(`/session/${sessionId}/solve`);
  }

  frame(
    sessionId: string,
    view: EulerView,
    quantize: number = 0,
  ): Promise<FrameDoc> {
    const query = new URLSearchParams({
      yaw: String(view.yaw),
      pitch: String(view.pitch),
      roll: String(view.roll),
      quantize: String(quantize),
    });
    return this.fetchFn(
      `${this.baseUrl}/session/${sessionId}/frame?${query}`,
    ).then((r) => decode<FrameDoc>(r));
  }
}
