import { ApiClient, SelectionGuard } from "../api";
import { renderBars, renderGroupCloud } from "../charts";
import { el, showError } from "../dom";
import { createScatter } from "../scatter";

export async function mountGroupsPage(
  root: HTMLElement,
  client: ApiClient,
): Promise<void> {
  root.replaceChildren();
  let map;
  let topics;
  try {
    [map, topics] = await Promise.all([client.map("groups"), client.topics()]);
  } catch (error) {
    showError(root, `Failed to load groups: ${(error as Error).message}`);
    return;
  }
  const topicNames = topics.map((t) => t.name);

  const detail = el("section", { class: "detail" }, [
    el("p", { class: "hint" }, ["Select a group on the map."]),
  ]);
  const guard = new SelectionGuard();

  const scatter = createScatter({
    coordinates: map.coordinates,
    labels: map.labels,
    colorIndex: map.dominant,
    radii: map.labels.map(() => 7),
    labelled: map.labels.map((_, i) => i),
    onSelect: (index) => {
      void showGroup(index);
    },
  });

  async function showGroup(index: number): Promise<void> {
    const token = guard.next();
    scatter.select(index);
    let group;
    try {
      group = await client.group(index);
    } catch (error) {
      showError(root, `Failed to load group: ${(error as Error).message}`);
      return;
    }
    if (!guard.isCurrent(token)) {
      return;
    }
    detail.replaceChildren(
      el("h2", { class: "group-name" }, [group.label]),
      el("h3", {}, ["Topic mass"]),
      renderBars(
        group.row.map((value, t) => ({
          label: topicNames[t] ?? `Topic ${t}`,
          value,
          colorIndex: t,
        })),
      ),
      el("h3", {}, ["Wordcloud"]),
      renderGroupCloud(group.wordcloud),
    );
  }

  root.append(
    el("div", { class: "page groups-page" }, [
      scatter.root as unknown as Node,
      detail,
    ]),
  );
}
