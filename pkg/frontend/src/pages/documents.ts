import { ApiClient, SelectionGuard } from "../api";
import { renderBars, renderTimeline } from "../charts";
import { el, showError } from "../dom";
import { createScatter } from "../scatter";
import type { DocumentDetail, MapResponse, TopicSummary } from "../types";

/**
 * Render the snippet with highlight spans marked. Span offsets are byte
 * offsets into the UTF-8 snippet, so slicing happens on encoded bytes.
 */
export function renderSnippet(doc: DocumentDetail): HTMLElement {
  if (doc.snippet.length === 0) {
    return el("p", { class: "empty-state" }, ["Document is empty."]);
  }
  const bytes = new TextEncoder().encode(doc.snippet);
  const decoder = new TextDecoder();
  const container = el("p", { class: "snippet" });
  let cursor = 0;
  for (const span of doc.highlights) {
    if (span.start > cursor) {
      container.append(decoder.decode(bytes.subarray(cursor, span.start)));
    }
    container.append(
      el("mark", { "data-term-index": String(span.term_index) }, [
        decoder.decode(bytes.subarray(span.start, span.end)),
      ]),
    );
    cursor = span.end;
  }
  if (cursor < bytes.length) {
    container.append(decoder.decode(bytes.subarray(cursor)));
  }
  return container;
}

export async function mountDocumentsPage(
  root: HTMLElement,
  client: ApiClient,
): Promise<void> {
  root.replaceChildren();
  let map: MapResponse;
  let topics: TopicSummary[];
  try {
    [map, topics] = await Promise.all([
      client.map("documents"),
      client.topics(),
    ]);
  } catch (error) {
    showError(root, `Failed to load documents: ${(error as Error).message}`);
    return;
  }
  const topicNames = topics.map((t) => t.name);

  const detail = el("section", { class: "detail" }, [
    el("p", { class: "hint" }, ["Select a document on the map."]),
  ]);
  const guard = new SelectionGuard();

  const scatter = createScatter({
    coordinates: map.coordinates,
    labels: map.labels,
    colorIndex: map.dominant,
    onSelect: (index) => {
      void showDocument(index);
    },
  });

  async function showDocument(index: number): Promise<void> {
    const token = guard.next();
    scatter.select(index);
    let doc: DocumentDetail;
    try {
      doc = await client.document(map.labels[index]);
    } catch (error) {
      showError(root, `Failed to load document: ${(error as Error).message}`);
      return;
    }
    if (!guard.isCurrent(token)) {
      return;
    }
    detail.replaceChildren(
      el("h2", { class: "doc-id" }, [doc.doc_id]),
      el("p", { class: "doc-meta" }, [
        `group: ${doc.group ?? "none"}, dominant topic: ` +
          `${topicNames[doc.dominant_topic] ?? doc.dominant_topic}`,
      ]),
      el("h3", {}, ["Topic distribution"]),
      renderBars(
        doc.topic_distribution.map((value, t) => ({
          label: topicNames[t] ?? `Topic ${t}`,
          value,
          colorIndex: t,
        })),
      ),
      el("h3", {}, ["Timeline"]),
      doc.timeline.length > 0
        ? (renderTimeline(doc.timeline, topicNames) as unknown as Node)
        : el("p", { class: "empty-state" }, ["No timeline windows."]),
      el("h3", {}, ["Snippet"]),
      renderSnippet(doc),
    );
  }

  root.append(
    el("div", { class: "page documents-page" }, [
      scatter.root as unknown as Node,
      detail,
    ]),
  );
}
