import { ApiClient, ApiError } from "../api";
import { renderBars, renderWordcloud } from "../charts";
import { clearError, el, showError } from "../dom";
import { createScatter, type Scatter } from "../scatter";
import type { TopicSummary } from "../types";

function renameForm(
  root: HTMLElement,
  client: ApiClient,
  topic: TopicSummary,
  scatter: Scatter,
  heading: HTMLElement,
): HTMLElement {
  const input = el("input", {
    class: "rename-input",
    value: topic.name,
    "aria-label": "topic name",
  }) as HTMLInputElement;
  const status = el("span", { class: "rename-status" });
  const button = el("button", { class: "rename-button" }, ["Rename"]);
  button.addEventListener("click", async () => {
    status.textContent = "";
    try {
      const updated = await client.renameTopic(topic.topic_id, input.value);
      // Refresh in place: map label and detail heading, no reload.
      heading.textContent = updated.name;
      scatter.setLabel(topic.topic_id, updated.name);
      input.value = updated.name;
      status.textContent = "saved";
      clearError(root);
    } catch (error) {
      if (error instanceof ApiError) {
        status.textContent =
          error.status === 409
            ? `conflict: ${error.message}`
            : error.message;
      } else {
        status.textContent = "request failed";
      }
    }
  });
  return el("div", { class: "rename-form" }, [input, button, status]);
}

export async function mountTopicsPage(
  root: HTMLElement,
  client: ApiClient,
): Promise<void> {
  root.replaceChildren();
  let map;
  let topics: TopicSummary[];
  try {
    [map, topics] = await Promise.all([client.map("topics"), client.topics()]);
  } catch (error) {
    showError(root, `Failed to load topics: ${(error as Error).message}`);
    return;
  }

  const detail = el("section", { class: "detail" }, [
    el("p", { class: "hint" }, ["Select a topic on the map."]),
  ]);
  const maxImportance = Math.max(...topics.map((t) => t.importance), 0);
  const scatter = createScatter({
    coordinates: map.coordinates,
    labels: map.labels,
    colorIndex: map.dominant,
    // Marker area proportional to importance.
    radii: topics.map((t) =>
      maxImportance > 0
        ? 4 + 14 * Math.sqrt(t.importance / maxImportance)
        : 6,
    ),
    labelled: topics.map((t) => t.topic_id),
    onSelect: (index) => {
      void showTopic(index);
    },
  });

  async function showTopic(topicId: number): Promise<void> {
    scatter.select(topicId);
    let topic: TopicSummary;
    let cloud;
    try {
      [topic, cloud] = await Promise.all([
        client.topic(topicId),
        client.topicWordcloud(topicId),
      ]);
    } catch (error) {
      showError(root, `Failed to load topic: ${(error as Error).message}`);
      return;
    }
    const heading = el("h2", { class: "topic-name" }, [topic.name]);
    detail.replaceChildren(
      heading,
      renameForm(root, client, topic, scatter, heading),
      el("p", { class: "topic-stats" }, [
        `importance ${topic.importance}, ` +
          `dominant in ${topic.dominant_doc_count} documents`,
      ]),
      renderBars(
        topic.top_terms.map((t) => ({
          label: t.term,
          value: t.weight,
          colorIndex: topic.topic_id,
        })),
      ),
      renderWordcloud(cloud),
    );
  }

  root.append(
    el("div", { class: "page topics-page" }, [scatter.root as unknown as Node, detail]),
  );
}
