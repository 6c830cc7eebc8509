// Thin typed client over the session-service HTTP API.

import type {
  PathResponse,
  SessionInfo,
  SessionRequestBody,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function expectJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      detail = ((await response.json()) as { detail?: string }).detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    public baseUrl: string,
    private fetcher: typeof fetch = (...args) => fetch(...args),
  ) {}

  createSession(body: SessionRequestBody): Promise<{ id: string }> {
    return this.fetcher(`${this.baseUrl}/sessions`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    }).then((r) => expectJson<{ id: string }>(r));
  }

  getSession(id: string): Promise<SessionInfo> {
    return this.fetcher(`${this.baseUrl}/sessions/${id}`).then((r) =>
      expectJson<SessionInfo>(r),
    );
  }

  postHumanMessage(id: string, text: string): Promise<{ queued: boolean }> {
    return this.fetcher(`${this.baseUrl}/sessions/${id}/human-message`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ text }),
    }).then((r) => expectJson<{ queued: boolean }>(r));
  }

  async documentMarkdown(id: string): Promise<string> {
    const response = await this.fetcher(`${this.baseUrl}/sessions/${id}/document.md`);
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return response.text();
  }

  graphStats(): Promise<{ nodes: number; edges: number }> {
    return this.fetcher(`${this.baseUrl}/graph/stats`).then((r) =>
      expectJson<{ nodes: number; edges: number }>(r),
    );
  }

  graphPath(params: Record<string, string | number>): Promise<PathResponse> {
    const query = new URLSearchParams(
      Object.fromEntries(Object.entries(params).map(([k, v]) => [k, String(v)])),
    );
    return this.fetcher(`${this.baseUrl}/graph/path?${query}`).then((r) =>
      expectJson<PathResponse>(r),
    );
  }
}
