/**
 * SVG scatter map with pan/zoom. The view transform lives on a single
 * <g> element; the data coordinates written to each point never change,
 * so nothing derived from the viewport can leak back to the server.
 */

export const PALETTE = [
  "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c",
  "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
  "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f",
  "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
];

/** Past this many points, only those inside the viewport are rendered. */
const CULL_THRESHOLD = 20000;

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ScatterOptions {
  coordinates: [number, number][];
  labels: string[];
  /** Palette index per point (dominant topic). */
  colorIndex: number[];
  /** Pixel radius per point; defaults to 4 for every point. */
  radii?: number[];
  /** Indices whose labels are drawn next to the marker. */
  labelled?: number[];
  width?: number;
  height?: number;
  onSelect?: (index: number) => void;
  onDeselect?: () => void;
}

export interface Scatter {
  root: SVGSVGElement;
  /** Mark exactly `ids` as highlighted (clears previous highlights). */
  highlight(ids: Set<number>): void;
  /** Mark one point as the current selection, or none. */
  select(index: number | null): void;
  /** Rename one point's label without touching anything else. */
  setLabel(index: number, label: string): void;
  /** Hide every point not in `ids`; pass null to show all. */
  filter(ids: Set<number> | null): void;
}

interface View {
  x: number;
  y: number;
  scale: number;
}

function fitTransform(
  coords: [number, number][],
  width: number,
  height: number,
  margin: number,
): (pt: [number, number]) => [number, number] {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const [x, y] of coords) {
    xMin = Math.min(xMin, x);
    xMax = Math.max(xMax, x);
    yMin = Math.min(yMin, y);
    yMax = Math.max(yMax, y);
  }
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  return ([x, y]) => [
    margin + ((x - xMin) / xSpan) * (width - 2 * margin),
    // SVG y grows downward; flip so the data's y grows upward.
    height - margin - ((y - yMin) / ySpan) * (height - 2 * margin),
  ];
}

export function createScatter(options: ScatterOptions): Scatter {
  const width = options.width ?? 640;
  const height = options.height ?? 440;
  const radii = options.radii;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "scatter");
  const pane = document.createElementNS(SVG_NS, "g");
  svg.append(pane);

  const view: View = { x: 0, y: 0, scale: 1 };
  const project = fitTransform(options.coordinates, width, height, 30);
  const screen = options.coordinates.map(project);
  const points: SVGCircleElement[] = [];
  const labels: SVGTextElement[] = [];
  let hidden: Set<number> | null = null;

  const applyView = () => {
    pane.setAttribute(
      "transform",
      `translate(${view.x} ${view.y}) scale(${view.scale})`,
    );
    if (screen.length > CULL_THRESHOLD) {
      cull();
    }
  };

  const visibleInViewport = (i: number): boolean => {
    const [x, y] = screen[i];
    const vx = x * view.scale + view.x;
    const vy = y * view.scale + view.y;
    return vx >= -20 && vx <= width + 20 && vy >= -20 && vy <= height + 20;
  };

  const cull = () => {
    for (let i = 0; i < points.length; i++) {
      const out = !visibleInViewport(i) || (hidden !== null && hidden.has(i));
      points[i].style.display = out ? "none" : "";
    }
  };

  for (let i = 0; i < screen.length; i++) {
    const [x, y] = screen[i];
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(x));
    circle.setAttribute("cy", String(y));
    circle.setAttribute("r", String(radii ? radii[i] : 4));
    circle.setAttribute(
      "fill",
      PALETTE[options.colorIndex[i] % PALETTE.length],
    );
    circle.setAttribute("class", "point");
    circle.dataset.index = String(i);
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = options.labels[i];
    circle.append(title);
    circle.addEventListener("click", (event) => {
      event.stopPropagation();
      options.onSelect?.(i);
    });
    pane.append(circle);
    points.push(circle);
  }

  for (const i of options.labelled ?? []) {
    const [x, y] = screen[i];
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(x));
    text.setAttribute("y", String(y - (radii ? radii[i] : 4) - 3));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("class", "point-label");
    text.dataset.index = String(i);
    text.textContent = options.labels[i];
    pane.append(text);
    labels.push(text);
  }

  svg.addEventListener("click", () => {
    options.onDeselect?.();
  });

  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const factor = event.deltaY < 0 ? 1.2 : 1 / 1.2;
    const next = Math.min(Math.max(view.scale * factor, 0.2), 40);
    // Zoom about the cursor so the hovered point stays put.
    const rect = svg.getBoundingClientRect();
    const px = event.clientX - rect.left;
    const py = event.clientY - rect.top;
    view.x = px - ((px - view.x) / view.scale) * next;
    view.y = py - ((py - view.y) / view.scale) * next;
    view.scale = next;
    applyView();
  });

  let dragging: { startX: number; startY: number } | null = null;
  svg.addEventListener("pointerdown", (event) => {
    dragging = { startX: event.clientX - view.x, startY: event.clientY - view.y };
  });
  svg.addEventListener("pointermove", (event) => {
    if (!dragging) {
      return;
    }
    view.x = event.clientX - dragging.startX;
    view.y = event.clientY - dragging.startY;
    applyView();
  });
  svg.addEventListener("pointerup", () => {
    dragging = null;
  });

  return {
    root: svg,
    highlight(ids) {
      for (let i = 0; i < points.length; i++) {
        points[i].classList.toggle("highlight", ids.has(i));
      }
    },
    select(index) {
      for (let i = 0; i < points.length; i++) {
        points[i].classList.toggle("selected", i === index);
      }
    },
    setLabel(index, label) {
      const point = points[index];
      const title = point.querySelector("title");
      if (title) {
        title.textContent = label;
      }
      for (const text of labels) {
        if (Number(text.dataset.index) === index) {
          text.textContent = label;
        }
      }
    },
    filter(ids) {
      hidden = ids === null
        ? null
        : new Set(
            Array.from({ length: points.length }, (_, i) => i).filter(
              (i) => !ids.has(i),
            ),
          );
      for (let i = 0; i < points.length; i++) {
        points[i].style.display =
          hidden !== null && hidden.has(i) ? "none" : "";
      }
    },
  };
}
