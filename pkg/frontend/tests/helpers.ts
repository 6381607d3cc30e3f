import { vi } from "vitest";
import type {
  DocumentDetail,
  GroupDetail,
  GroupSummary,
  MapResponse,
  Meta,
  TopicSummary,
  TopicWordcloud,
  WordDetail,
} from "../src/types";

export const META: Meta = {
  n_topics: 2,
  n_docs: 3,
  n_terms: 4,
  has_groups: true,
  bundle_hash: "hash0",
};

export const TOPICS: TopicSummary[] = [
  {
    topic_id: 0,
    name: "Topic 0",
    importance: 12.5,
    top_terms: [
      { term_index: 0, term: "alpha", weight: 0.9 },
      { term_index: 2, term: "gamma", weight: 0.4 },
    ],
    dominant_doc_count: 2,
  },
  {
    topic_id: 1,
    name: "Topic 1",
    importance: 7.5,
    top_terms: [
      { term_index: 1, term: "beta", weight: 0.8 },
      { term_index: 3, term: "delta", weight: 0.3 },
    ],
    dominant_doc_count: 1,
  },
];

function mapResponse(
  kind: MapResponse["kind"],
  labels: string[],
  dominant: number[],
): MapResponse {
  return {
    kind,
    coordinates: labels.map((_, i) => [i, (i * 7) % 3] as [number, number]),
    params: { method: "umap", seed: 0 },
    labels,
    dominant,
    bundle_hash: "hash0",
  };
}

export const MAPS: Record<string, MapResponse> = {
  topics: mapResponse("topics", ["Topic 0", "Topic 1"], [0, 1]),
  words: mapResponse("words", ["alpha", "beta", "gamma", "delta"], [0, 1, 0, 1]),
  documents: mapResponse("documents", ["d0", "d1", "d2"], [0, 1, 0]),
  groups: mapResponse("groups", ["g0", "g1"], [0, 1]),
};

export const WORD_2: WordDetail = {
  term_index: 2,
  term: "gamma",
  zero_norm: false,
  associations: [
    { term_index: 0, term: "alpha", similarity: 0.75 },
    { term_index: 3, term: "delta", similarity: 0.25 },
  ],
  distribution: { values: [0.6, 0.4], undefined: false },
};

export const DOCUMENT_D1: DocumentDetail = {
  doc_id: "d1",
  group: "g1",
  snippet: "alpha beta café gamma",
  snippet_bytes: 22,
  dominant_topic: 1,
  highlight_topic: 1,
  topic_distribution: [0.3, 0.7],
  highlights: [
    { start: 0, end: 5, term_index: 0, term: "alpha", weight: 0.5 },
    { start: 17, end: 22, term_index: 2, term: "gamma", weight: 0.2 },
  ],
  timeline: [
    { token_start: 0, token_end: 2, distribution: [0.5, 0.5], empty: false },
    { token_start: 2, token_end: 4, distribution: [0.25, 0.75], empty: false },
  ],
};

export const GROUPS: GroupSummary[] = [
  { id: 0, label: "g0", theta_total: 1.4 },
  { id: 1, label: "g1", theta_total: 1.6 },
];

export const GROUP_1: GroupDetail = {
  id: 1,
  label: "g1",
  row: [0.5, 1.1],
  normalized: [0.3125, 0.6875],
  undefined: false,
  wordcloud: [
    { term_index: 1, term: "beta", count: 9 },
    { term_index: 3, term: "delta", count: 4 },
  ],
};

export const CLOUD_0: TopicWordcloud = {
  topic_id: 0,
  width: 800,
  height: 500,
  empty: false,
  placements: [
    {
      term: "alpha",
      weight: 0.9,
      size: 40,
      x: 400,
      y: 250,
      rotation: 0,
      box: [350, 230, 450, 270],
    },
  ],
  dropped: [],
};

export interface RecordedRequest {
  method: string;
  url: string;
  body: unknown;
}

export interface MockApi {
  requests: RecordedRequest[];
  /** URLs seen, e.g. "GET /api/words/2?n_assoc=20". */
  calls(prefix?: string): string[];
}

type Routes = Record<string, unknown | ((body: unknown) => unknown)>;

function defaultRoutes(): Routes {
  return {
    "GET /api/meta": META,
    "GET /api/topics": TOPICS,
    "GET /api/topics/0": TOPICS[0],
    "GET /api/topics/1": TOPICS[1],
    "GET /api/topics/0/wordcloud": CLOUD_0,
    "GET /api/topics/1/wordcloud": { ...CLOUD_0, topic_id: 1 },
    "GET /api/maps/topics": MAPS.topics,
    "GET /api/maps/words": MAPS.words,
    "GET /api/maps/documents": MAPS.documents,
    "GET /api/maps/groups": MAPS.groups,
    "GET /api/words/2?n_assoc=20": WORD_2,
    "GET /api/documents/d1": DOCUMENT_D1,
    "GET /api/groups": GROUPS,
    "GET /api/groups/1": GROUP_1,
    "PATCH /api/topics/0/name": (body: unknown) => ({
      ...TOPICS[0],
      name: (body as { name: string }).name,
    }),
  };
}

/**
 * Install a fetch mock backed by a route table. Returns the request log;
 * unknown routes answer 404 with the server's error shape.
 */
export function installMockApi(overrides: Routes = {}): MockApi {
  const routes = { ...defaultRoutes(), ...overrides };
  const requests: RecordedRequest[] = [];
  vi.stubGlobal(
    "fetch",
    vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      const method = init?.method ?? "GET";
      const body = init?.body ? JSON.parse(String(init.body)) : undefined;
      requests.push({ method, url, body });
      const route = routes[`${method} ${url}`];
      if (route === undefined) {
        return new Response(
          JSON.stringify({
            error: { code: "not_found", message: `no route ${url}` },
          }),
          { status: 404, headers: { "Content-Type": "application/json" } },
        );
      }
      const payload = typeof route === "function" ? route(body) : route;
      if (payload instanceof Response) {
        return payload;
      }
      return new Response(JSON.stringify(payload), {
        status: 200,
        headers: { "Content-Type": "application/json" },
      });
    }),
  );
  return {
    requests,
    calls(prefix?: string) {
      const all = requests.map((r) => `${r.method} ${r.url}`);
      return prefix ? all.filter((c) => c.startsWith(prefix)) : all;
    },
  };
}

/** Wait until queued microtasks (awaited fetches) have settled. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 10; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

export function errorResponse(
  status: number,
  code: string,
  message: string,
): Response {
  return new Response(JSON.stringify({ error: { code, message } }), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
