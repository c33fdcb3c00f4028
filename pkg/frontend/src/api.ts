// Thin typed client over the session service HTTP API.

import type {
  HvacAction,
  ProposeResponse,
  RecommendResponse,
  SessionDoc,
  SessionView,
  StepReportView,
} from "./types";

export interface ApiError {
  error: string;
  code: number;
}

export class ServiceError extends Error {
  readonly code: number;

  constructor(body: ApiError) {
    super(body.error);
    this.code = body.code;
  }
}

async function unwrap<T>(resp: Response): Promise<T> {
  const body = await resp.json();
  if (!resp.ok) {
    throw new ServiceError(body as ApiError);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  private async post<T>(path: string, body?: unknown): Promise<T> {
    const resp = await fetch(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? "{}" : JSON.stringify(body),
    });
    return unwrap<T>(resp);
  }

  async health(): Promise<boolean> {
    try {
      const resp = await fetch(this.url("/health"));
      return resp.ok;
    } catch {
      return false;
    }
  }

  createSession(options?: { seed?: number; config?: Record<string, unknown> }): Promise<{ id: string }> {
    return this.post<{ id: string }>("/sessions", options ?? {});
  }

  getSession(id: string, debug = false): Promise<SessionView> {
    return fetch(this.url(`/sessions/${id}?debug=${debug}`)).then((r) => unwrap<SessionView>(r));
  }

  recommend(id: string): Promise<RecommendResponse> {
    return this.post<RecommendResponse>(`/sessions/${id}/recommend`);
  }

  step(id: string, action: HvacAction): Promise<StepReportView> {
    return this.post<StepReportView>(`/sessions/${id}/step`, { action });
  }

  propose(id: string, action: HvacAction): Promise<ProposeResponse> {
    return this.post<ProposeResponse>(`/sessions/${id}/propose`, { action });
  }

  exportSession(id: string, debug = false): Promise<SessionDoc> {
    return fetch(this.url(`/sessions/${id}/export?debug=${debug}`)).then((r) =>
      unwrap<SessionDoc>(r),
    );
  }
}
