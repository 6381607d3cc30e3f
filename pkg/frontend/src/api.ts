import type {
  DocumentDetail,
  GroupDetail,
  GroupSummary,
  MapKind,
  MapResponse,
  Meta,
  TopicSummary,
  TopicWordcloud,
  WordDetail,
} from "./types";

/** Error raised for any non-2xx API response, carrying the server's code. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // Non-JSON error body: keep the HTTP status line.
  }
  return new ApiError(response.status, code, message);
}

/**
 * Monotonic token source for discarding stale responses: a page takes a
 * token before each selection request and only applies the result if the
 * token is still current when the response arrives.
 */
export class SelectionGuard {
  private seq = 0;

  next(): number {
    this.seq += 1;
    return this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}

/**
 * Typed client for the JSON API. GET requests are deduplicated per URL
 * while in flight; mutations are never deduplicated.
 */
export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(private readonly base: string = "") {}

  private async fetchJson<T>(url: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.base + url, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private get<T>(url: string): Promise<T> {
    const pending = this.inflight.get(url);
    if (pending) {
      return pending as Promise<T>;
    }
    const request = this.fetchJson<T>(url).finally(() => {
      this.inflight.delete(url);
    });
    this.inflight.set(url, request);
    return request;
  }

  meta(): Promise<Meta> {
    return this.get("/api/meta");
  }

  topics(): Promise<TopicSummary[]> {
    return this.get("/api/topics");
  }

  topic(id: number): Promise<TopicSummary> {
    return this.get(`/api/topics/${id}`);
  }

  renameTopic(id: number, name: string): Promise<TopicSummary> {
    return this.fetchJson(`/api/topics/${id}/name`, {
      method: "PATCH",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ name }),
    });
  }

  topicWordcloud(id: number): Promise<TopicWordcloud> {
    return this.get(`/api/topics/${id}/wordcloud`);
  }

  map(kind: MapKind): Promise<MapResponse> {
    return this.get(`/api/maps/${kind}`);
  }

  word(id: number, nAssoc = 20): Promise<WordDetail> {
    return this.get(`/api/words/${id}?n_assoc=${nAssoc}`);
  }

  document(id: string): Promise<DocumentDetail> {
    return this.get(`/api/documents/${encodeURIComponent(id)}`);
  }

  groups(): Promise<GroupSummary[]> {
    return this.get("/api/groups");
  }

  group(id: number | string): Promise<GroupDetail> {
    return this.get(`/api/groups/${encodeURIComponent(String(id))}`);
  }
}
