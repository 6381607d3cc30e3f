import { ApiClient, SelectionGuard } from "../api";
import { renderBars } from "../charts";
import { el, showError } from "../dom";
import { createScatter } from "../scatter";

export async function mountWordsPage(
  root: HTMLElement,
  client: ApiClient,
): Promise<void> {
  root.replaceChildren();
  let map;
  let topics;
  try {
    [map, topics] = await Promise.all([client.map("words"), client.topics()]);
  } catch (error) {
    showError(root, `Failed to load words: ${(error as Error).message}`);
    return;
  }
  const topicNames = topics.map((t) => t.name);

  const detail = el("section", { class: "detail" }, [
    el("p", { class: "hint" }, ["Select a word on the map."]),
  ]);
  const guard = new SelectionGuard();

  const scatter = createScatter({
    coordinates: map.coordinates,
    labels: map.labels,
    colorIndex: map.dominant,
    onSelect: (index) => {
      void showWord(index);
    },
    onDeselect: () => {
      guard.next(); // invalidate any in-flight selection
      scatter.highlight(new Set());
      scatter.select(null);
      detail.replaceChildren(
        el("p", { class: "hint" }, ["Select a word on the map."]),
      );
    },
  });

  const search = el("input", {
    class: "word-search",
    placeholder: "filter words by prefix",
    "aria-label": "filter words",
  }) as HTMLInputElement;
  search.addEventListener("input", () => {
    const prefix = search.value.toLowerCase();
    if (!prefix) {
      scatter.filter(null);
      return;
    }
    const matching = new Set<number>();
    map.labels.forEach((label, i) => {
      if (label.toLowerCase().startsWith(prefix)) {
        matching.add(i);
      }
    });
    scatter.filter(matching);
  });

  async function showWord(termId: number): Promise<void> {
    const token = guard.next();
    scatter.select(termId);
    let word;
    try {
      word = await client.word(termId);
    } catch (error) {
      showError(root, `Failed to load word: ${(error as Error).message}`);
      return;
    }
    if (!guard.isCurrent(token)) {
      return; // a newer selection superseded this response
    }
    scatter.highlight(new Set(word.associations.map((a) => a.term_index)));
    const children: (Node | string)[] = [
      el("h2", { class: "word-name" }, [word.term]),
    ];
    if (word.zero_norm || word.associations.length === 0) {
      children.push(el("p", { class: "empty-state" }, ["no associations"]));
    } else {
      children.push(
        el(
          "ul",
          { class: "associations" },
          word.associations.map((a) =>
            el("li", { "data-term-index": String(a.term_index) }, [
              `${a.term} (${a.similarity})`,
            ]),
          ),
        ),
      );
    }
    children.push(
      el("h3", {}, ["Topic distribution (word + neighborhood)"]),
      renderBars(
        word.distribution.values.map((value, t) => ({
          label: topicNames[t] ?? `Topic ${t}`,
          value,
          colorIndex: t,
        })),
      ),
    );
    detail.replaceChildren(...children);
  }

  root.append(
    el("div", { class: "page words-page" }, [
      search,
      scatter.root as unknown as Node,
      detail,
    ]),
  );
}
