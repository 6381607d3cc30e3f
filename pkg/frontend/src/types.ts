/** Payload shapes of the JSON API. Field names mirror the server exactly. */

export interface Meta {
  n_topics: number;
  n_docs: number;
  n_terms: number;
  has_groups: boolean;
  bundle_hash: string;
}

export interface TermWeight {
  term_index: number;
  term: string;
  weight: number;
}

export interface TopicSummary {
  topic_id: number;
  name: string;
  importance: number;
  top_terms: TermWeight[];
  dominant_doc_count: number;
}

export type MapKind = "topics" | "words" | "documents" | "groups";

export interface MapResponse {
  kind: MapKind;
  coordinates: [number, number][];
  params: Record<string, unknown>;
  labels: string[];
  dominant: number[];
  bundle_hash: string;
}

export interface Association {
  term_index: number;
  term: string;
  similarity: number;
}

export interface WordDetail {
  term_index: number;
  term: string;
  zero_norm: boolean;
  associations: Association[];
  distribution: { values: number[]; undefined: boolean };
}

export interface HighlightSpan {
  start: number;
  end: number;
  term_index: number;
  term: string;
  weight: number;
}

export interface TimelineWindow {
  token_start: number;
  token_end: number;
  distribution: number[];
  empty: boolean;
}

export interface DocumentDetail {
  doc_id: string;
  group: string | null;
  snippet: string;
  snippet_bytes: number;
  dominant_topic: number;
  highlight_topic: number;
  topic_distribution: number[];
  highlights: HighlightSpan[];
  timeline: TimelineWindow[];
}

export interface GroupSummary {
  id: number;
  label: string;
  theta_total: number;
}

export interface GroupCloudEntry {
  term_index: number;
  term: string;
  count: number;
}

export interface GroupDetail {
  id: number;
  label: string;
  row: number[];
  normalized: number[];
  undefined: boolean;
  wordcloud: GroupCloudEntry[];
}

export interface WordPlacement {
  term: string;
  weight: number;
  size: number;
  x: number;
  y: number;
  rotation: number;
  box: [number, number, number, number];
}

export interface TopicWordcloud {
  topic_id: number;
  width?: number;
  height?: number;
  empty: boolean;
  placements: WordPlacement[];
  dropped: string[];
}
