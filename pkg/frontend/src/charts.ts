import { el } from "./dom";
import { PALETTE } from "./scatter";
import type { TimelineWindow, TopicWordcloud, GroupCloudEntry } from "./types";

/**
 * Horizontal bar chart. Every rendered number is the API value verbatim;
 * only the bar width is presentation.
 */
export function renderBars(
  items: { label: string; value: number; colorIndex?: number }[],
): HTMLElement {
  const max = Math.max(...items.map((item) => item.value), 0);
  const rows = items.map((item, i) =>
    el("div", { class: "bar-row" }, [
      el("span", { class: "bar-label" }, [item.label]),
      el("span", {
        class: "bar-fill",
        style:
          `width:${max > 0 ? (100 * item.value) / max : 0}%;` +
          `background:${PALETTE[(item.colorIndex ?? i) % PALETTE.length]}`,
      }),
      el("span", { class: "bar-value" }, [String(item.value)]),
    ]),
  );
  return el("div", { class: "bars" }, rows);
}

const SVG_NS = "http://www.w3.org/2000/svg";

/**
 * Per-window topic share over token positions. Hovering a window's
 * marker shows the full distribution via <title>.
 */
export function renderTimeline(
  windows: TimelineWindow[],
  topicNames: string[],
  width = 420,
  height = 160,
): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "timeline");
  const drawable = windows.filter((w) => !w.empty);
  const span = Math.max(...windows.map((w) => w.token_end), 1);
  const x = (w: TimelineWindow) =>
    ((w.token_start + w.token_end) / 2 / span) * (width - 20) + 10;
  const y = (v: number) => (1 - v) * (height - 20) + 10;
  for (let t = 0; t < topicNames.length; t++) {
    if (drawable.length > 1) {
      const line = document.createElementNS(SVG_NS, "polyline");
      line.setAttribute(
        "points",
        drawable.map((w) => `${x(w)},${y(w.distribution[t])}`).join(" "),
      );
      line.setAttribute("fill", "none");
      line.setAttribute("stroke", PALETTE[t % PALETTE.length]);
      svg.append(line);
    }
    for (const w of drawable) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(x(w)));
      dot.setAttribute("cy", String(y(w.distribution[t])));
      dot.setAttribute("r", "2.5");
      dot.setAttribute("fill", PALETTE[t % PALETTE.length]);
      dot.setAttribute("class", "timeline-dot");
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent =
        `tokens ${w.token_start}-${w.token_end}: ` +
        topicNames
          .map((name, i) => `${name}=${w.distribution[i]}`)
          .join(", ");
      dot.append(title);
      svg.append(dot);
    }
  }
  return svg;
}

/** Topic wordcloud from server-computed placements. */
export function renderWordcloud(cloud: TopicWordcloud): Element {
  if (cloud.empty || cloud.placements.length === 0) {
    return el("p", { class: "empty-state" }, ["No terms to display."]);
  }
  const width = cloud.width ?? 800;
  const height = cloud.height ?? 500;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "wordcloud");
  cloud.placements.forEach((p, i) => {
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(p.x));
    text.setAttribute("y", String(p.y));
    text.setAttribute("font-size", String(p.size));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("fill", PALETTE[i % PALETTE.length]);
    if (p.rotation) {
      text.setAttribute("transform", `rotate(90 ${p.x} ${p.y})`);
    }
    text.textContent = p.term;
    svg.append(text);
  });
  return svg;
}

/** Group wordcloud: sized list of the API's lexical weights. */
export function renderGroupCloud(entries: GroupCloudEntry[]): HTMLElement {
  if (entries.length === 0) {
    return el("p", { class: "empty-state" }, ["No term occurrences."]);
  }
  const max = entries[0].count;
  return el(
    "div",
    { class: "group-cloud" },
    entries.map((entry) =>
      el(
        "span",
        {
          class: "cloud-term",
          title: `${entry.term}: ${entry.count}`,
          style: `font-size:${10 + 18 * Math.sqrt(entry.count / max)}px`,
        },
        [entry.term],
      ),
    ),
  );
}
