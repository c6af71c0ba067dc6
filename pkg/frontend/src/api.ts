// Thin typed client over the service HTTP API. Every method returns the
// parsed body untouched, so callers always hold server-confirmed data.

import type {
  ClassifyResponse,
  LayoutResponse,
  SessionCreateResponse,
  SessionView,
  SuggestResponse,
} from "./types.js";

export class ApiError extends Error {
  /** HTTP status; 0 means the service was unreachable. */
  readonly status: number;
  constructor(status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
    this.status = status;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** What the rest of the app needs from the service; tests stub this. */
export interface ServiceClient {
  layout(): Promise<LayoutResponse>;
  classify(ingredients: string[]): Promise<ClassifyResponse>;
  createSession(ingredients: string[], target: string): Promise<SessionCreateResponse>;
  getSession(sessionId: string): Promise<SessionView>;
  suggest(sessionId: string, ingredient: string): Promise<SuggestResponse>;
  apply(sessionId: string, replaced: string, replacement: string): Promise<SessionView>;
  deleteSession(sessionId: string): Promise<void>;
}

export class ApiClient implements ServiceClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    // bind so the client works both in the browser and under node
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (response.status === 204) {
      return undefined as T;
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      /* non-JSON error body; detail stays generic */
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? String((payload as { detail: unknown }).detail)
          : `unexpected status ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  layout(): Promise<LayoutResponse> {
    return this.request("GET", "/layout");
  }

  classify(ingredients: string[]): Promise<ClassifyResponse> {
    return this.request("POST", "/classify", { ingredients });
  }

  createSession(ingredients: string[], target: string): Promise<SessionCreateResponse> {
    return this.request("POST", "/sessions", { ingredients, target });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}`);
  }

  suggest(sessionId: string, ingredient: string): Promise<SuggestResponse> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/suggest`, {
      ingredient,
    });
  }

  apply(sessionId: string, replaced: string, replacement: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/apply`, {
      replaced,
      replacement,
    });
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request("DELETE", `/sessions/${encodeURIComponent(sessionId)}`);
  }
}
