"""Static SVG figure rendering and batch export.

Each renderer is a pure function of a FigureSpec and a plain-data slice
of the interpretation cache, emitting standalone SVG 1.1 with stable
element identifiers, so identical inputs produce byte-identical files.
Every hex color in the output comes from the active palette; structural
strokes and text use the black/white/none keywords.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from topiclens import interpret, tokenize, wordcloud
from topiclens.bundle import CorpusBundle, effective_doc_term

# Qualitative 20-color cycle; topics beyond 20 reuse colors but switch
# to a rotated square marker on the maps.
DEFAULT_PALETTE = [
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c",
    "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f",
    "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
]

FIGURE_KINDS = (
    "topic_map", "word_map", "document_map", "group_map",
    "term_bars", "wordcloud", "timeline",
)

MANIFEST_NAME = "figures_manifest.json"


@dataclass
class FigureSpec:
    kind: str
    width: int = 900
    height: int = 600
    palette: list[str] = field(default_factory=lambda: list(DEFAULT_PALETTE))
    font_family: str = "sans-serif"
    title: str | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind: {self.kind!r}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("figure dimensions must be positive")
        if not self.palette:
            raise ValueError("palette must be non-empty")


def _f(x: float) -> str:
    return f"{float(x):.4f}"


def _color(spec: FigureSpec, i: int) -> str:
    return spec.palette[i % len(spec.palette)]


def _svg_open(spec: FigureSpec) -> list[str]:
    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{spec.width}" height="{spec.height}" '
        f'viewBox="0 0 {spec.width} {spec.height}" '
        f'font-family="{escape(spec.font_family, {chr(34): "&quot;"})}">'
    ]
    if spec.title:
        parts.append(f"<title>{escape(spec.title)}</title>")
        parts.append(
            f'<text id="figure-title" x="{spec.width / 2:.1f}" y="18" '
            'text-anchor="middle" font-size="14" fill="black">'
            f"{escape(spec.title)}</text>")
    return parts


def _scale_points(coords: np.ndarray, width: float, height: float,
                  margin: float) -> np.ndarray:
    """Map data coordinates into the pixel frame, y flipped."""
    out = np.empty_like(coords, dtype=np.float64)
    for axis, (lo_px, hi_px) in enumerate(
            ((margin, width - margin), (margin, height - margin))):
        lo = coords[:, axis].min() if coords.shape[0] else 0.0
        hi = coords[:, axis].max() if coords.shape[0] else 0.0
        span = hi - lo
        if span <= 0.0:
            out[:, axis] = (lo_px + hi_px) * 0.5
        else:
            unit = (coords[:, axis] - lo) / span
            if axis == 1:
                unit = 1.0 - unit
            out[:, axis] = lo_px + unit * (hi_px - lo_px)
    return out


def _require(data: dict, keys: tuple[str, ...], kind: str) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise ValueError(
            f"data for kind {kind!r} is missing {', '.join(missing)}")


def _marker(spec: FigureSpec, ident: str, x: float, y: float, r: float,
            color_index: int, label: str | None = None) -> str:
    """Circle marker; palette reuse past its length switches to a
    rotated square so reused colors stay distinguishable."""
    color = _color(spec, color_index)
    title = f"<title>{escape(label)}</title>" if label else ""
    if color_index < len(spec.palette):
        return (f'<circle id="{ident}" cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" '
                f'fill="{color}" fill-opacity="0.8" stroke="black" '
                f'stroke-width="0.5">{title}</circle>')
    side = r * 2.0 / math.sqrt(2.0)
    x0 = x - side / 2.0
    y0 = y - side / 2.0
    return (f'<rect id="{ident}" x="{_f(x0)}" y="{_f(y0)}" width="{_f(side)}" '
            f'height="{_f(side)}" fill="{color}" fill-opacity="0.8" '
            f'stroke="black" stroke-width="0.5" '
            f'transform="rotate(45 {_f(x)} {_f(y)})">{title}</rect>')


def _render_topic_map(spec: FigureSpec, data: dict) -> str:
    _require(data, ("coordinates", "importances", "names"), spec.kind)
    coords = np.asarray(data["coordinates"], dtype=np.float64).reshape(-1, 2)
    importances = np.asarray(data["importances"], dtype=np.float64)
    names = list(data["names"])
    if not (coords.shape[0] == importances.shape[0] == len(names)):
        raise ValueError("topic_map slice lengths disagree")
    parts = _svg_open(spec)
    pts = _scale_points(coords, spec.width, spec.height, margin=50.0)
    r_max = 0.06 * min(spec.width, spec.height)
    top = importances.max() if importances.size else 0.0
    for t in range(coords.shape[0]):
        # Marker area proportional to importance: radius scales as sqrt.
        r = r_max * math.sqrt(importances[t] / top) if top > 0.0 else 4.0
        parts.append(_marker(spec, f"topic-{t}", pts[t, 0], pts[t, 1],
                             max(r, 0.0), t, names[t]))
    for t in range(coords.shape[0]):
        parts.append(
            f'<text id="topic-label-{t}" x="{_f(pts[t, 0])}" '
            f'y="{_f(pts[t, 1] - 4.0)}" text-anchor="middle" font-size="11" '
            f'fill="black">{escape(names[t])}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_point_map(spec: FigureSpec, data: dict, prefix: str,
                      labels_for: list[int] | None = None) -> str:
    _require(data, ("coordinates", "labels", "dominant"), spec.kind)
    coords = np.asarray(data["coordinates"], dtype=np.float64).reshape(-1, 2)
    labels = list(data["labels"])
    dominant = [int(d) for d in data["dominant"]]
    if not (coords.shape[0] == len(labels) == len(dominant)):
        raise ValueError(f"{spec.kind} slice lengths disagree")
    parts = _svg_open(spec)
    pts = _scale_points(coords, spec.width, spec.height, margin=40.0)
    radius = 5.0 if prefix == "group" else 3.0
    for i in range(coords.shape[0]):
        parts.append(_marker(spec, f"{prefix}-{i}", pts[i, 0], pts[i, 1],
                             radius, dominant[i], labels[i]))
    show = labels_for if labels_for is not None else []
    for i in show:
        parts.append(
            f'<text id="{prefix}-label-{i}" x="{_f(pts[i, 0])}" '
            f'y="{_f(pts[i, 1] - radius - 2.0)}" text-anchor="middle" '
            f'font-size="10" fill="black">{escape(str(labels[i]))}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_word_map(spec: FigureSpec, data: dict) -> str:
    _require(data, ("coordinates", "labels", "dominant", "prevalence"), spec.kind)
    prevalence = np.asarray(data["prevalence"], dtype=np.float64)
    # Label only the most prevalent words to keep the figure readable.
    n_labels = min(40, prevalence.shape[0])
    order = np.argsort(-prevalence, kind="stable")[:n_labels]
    return _render_point_map(spec, data, "word", labels_for=[int(i) for i in order])


def _render_term_bars(spec: FigureSpec, data: dict) -> str:
    _require(data, ("terms", "weights"), spec.kind)
    terms = list(data["terms"])
    weights = [float(w) for w in data["weights"]]
    if len(terms) != len(weights):
        raise ValueError("term_bars slice lengths disagree")
    color_index = int(data.get("color_index", 0))
    parts = _svg_open(spec)
    top_pad = 30.0 if spec.title else 12.0
    label_w = 0.3 * spec.width
    bar_area = spec.width - label_w - 20.0
    n = max(len(terms), 1)
    row_h = (spec.height - top_pad - 10.0) / n
    bar_h = max(min(row_h * 0.7, 26.0), 2.0)
    w_max = max((w for w in weights if w > 0.0), default=0.0)
    for i, (term, w) in enumerate(zip(terms, weights)):
        y = top_pad + i * row_h
        length = bar_area * (w / w_max) if w_max > 0.0 and w > 0.0 else 0.0
        parts.append(
            f'<text id="bar-label-{i}" x="{_f(label_w - 6.0)}" '
            f'y="{_f(y + row_h / 2.0)}" text-anchor="end" font-size="11" '
            f'dominant-baseline="middle" fill="black">{escape(str(term))}</text>')
        parts.append(
            f'<rect id="bar-{i}" x="{_f(label_w)}" '
            f'y="{_f(y + (row_h - bar_h) / 2.0)}" width="{_f(length)}" '
            f'height="{_f(bar_h)}" fill="{_color(spec, color_index)}"></rect>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_wordcloud(spec: FigureSpec, data: dict) -> str:
    _require(data, ("layout",), spec.kind)
    layout: wordcloud.WordcloudLayout = data["layout"]
    parts = _svg_open(spec)
    sx = spec.width / layout.width
    sy = spec.height / layout.height
    if sx != 1.0 or sy != 1.0:
        parts.append(f'<g transform="scale({_f(sx)} {_f(sy)})">')
    for i, p in enumerate(layout.placements):
        rotate = f' transform="rotate(90 {_f(p.x)} {_f(p.y)})"' if p.rotation else ""
        parts.append(
            f'<text id="word-{i}" x="{_f(p.x)}" y="{_f(p.y)}" '
            f'font-size="{_f(p.size)}" fill="{_color(spec, i)}" '
            f'text-anchor="middle" dominant-baseline="central"{rotate}>'
            f"{escape(p.term)}</text>")
    if sx != 1.0 or sy != 1.0:
        parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_timeline(spec: FigureSpec, data: dict) -> str:
    _require(data, ("windows", "topic_names"), spec.kind)
    windows = list(data["windows"])
    names = list(data["topic_names"])
    parts = _svg_open(spec)
    left, right = 45.0, 15.0
    top = 30.0 if spec.title else 15.0
    bottom = 25.0
    plot_w = spec.width - left - right
    plot_h = spec.height - top - bottom
    parts.append(
        f'<rect id="plot-frame" x="{_f(left)}" y="{_f(top)}" '
        f'width="{_f(plot_w)}" height="{_f(plot_h)}" fill="none" '
        'stroke="black" stroke-width="1"></rect>')
    if windows:
        last_end = max(int(w["token_end"]) for w in windows)
        span = max(last_end, 1)
        for t, name in enumerate(names):
            points = []
            for w in windows:
                if w.get("empty"):
                    continue
                mid = (int(w["token_start"]) + int(w["token_end"])) / 2.0
                x = left + plot_w * (mid / span)
                y = top + plot_h * (1.0 - float(w["distribution"][t]))
                points.append(f"{_f(x)},{_f(y)}")
            if not points:
                continue
            if len(points) == 1:
                x, y = points[0].split(",")
                parts.append(
                    f'<circle id="timeline-topic-{t}" cx="{x}" cy="{y}" '
                    f'r="3.0000" fill="{_color(spec, t)}"><title>'
                    f"{escape(name)}</title></circle>")
            else:
                parts.append(
                    f'<polyline id="timeline-topic-{t}" fill="none" '
                    f'stroke="{_color(spec, t)}" stroke-width="1.5" '
                    f'points="{" ".join(points)}"><title>{escape(name)}'
                    "</title></polyline>")
    for frac, label in ((0.0, "1.0"), (0.5, "0.5"), (1.0, "0.0")):
        parts.append(
            f'<text id="ytick-{label}" x="{_f(left - 6.0)}" '
            f'y="{_f(top + plot_h * frac)}" text-anchor="end" font-size="10" '
            f'dominant-baseline="middle" fill="black">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


_RENDERERS = {
    "topic_map": _render_topic_map,
    "word_map": _render_word_map,
    "document_map": lambda spec, data: _render_point_map(spec, data, "doc"),
    "group_map": lambda spec, data: _render_point_map(
        spec, data, "group",
        labels_for=list(range(len(data.get("labels", []))))),
    "term_bars": _render_term_bars,
    "wordcloud": _render_wordcloud,
    "timeline": _render_timeline,
}


def render_figure(spec: FigureSpec, data: dict) -> str:
    """Render one figure to an SVG string.

    data is the cache slice matching spec.kind; a mismatch raises
    ValueError naming the missing fields.
    """
    return _RENDERERS[spec.kind](spec, data)


def _spec_for(kind: str, overrides: dict | None, title: str | None) -> FigureSpec:
    overrides = overrides or {}
    return FigureSpec(
        kind=kind,
        width=int(overrides.get("width", 900)),
        height=int(overrides.get("height", 600)),
        palette=list(overrides.get("palette", DEFAULT_PALETTE)),
        font_family=str(overrides.get("font_family", "sans-serif")),
        title=title,
    )


def export_all(bundle: CorpusBundle, cache: dict, out_dir: str | Path,
               overrides: dict | None = None) -> dict:
    """Write every applicable figure plus figures_manifest.json.

    Emits the shared maps, per-topic term bars and wordclouds, per-group
    wordclouds, and per-document timelines.  Figures whose data is
    absent (no groups, no positive weights) are listed under "skipped".
    Returns the manifest dict.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files: list[dict] = []
    skipped: list[dict] = []
    seed = int(cache.get("seed", 0))
    phi_hat = interpret.clamped_column_normalized(bundle.phi)
    topic_names = bundle.topic_names

    def emit(rel: str, kind: str, subject: str, svg: str) -> None:
        target = out / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(svg, encoding="utf-8")
        files.append({"path": rel, "kind": kind, "subject": subject})

    maps = cache["maps"]
    emit("topic_map.svg", "topic_map", "", render_figure(
        _spec_for("topic_map", overrides, "Topic map"),
        {"coordinates": maps["topics"]["coordinates"],
         "importances": cache["topic_importance"],
         "names": topic_names}))

    word_dominant = [int(d) for d in np.argmax(phi_hat, axis=0)] \
        if bundle.n_terms else []
    emit("word_map.svg", "word_map", "", render_figure(
        _spec_for("word_map", overrides, "Word map"),
        {"coordinates": maps["words"]["coordinates"],
         "labels": bundle.vocabulary,
         "dominant": word_dominant,
         "prevalence": cache["term_prevalence"]}))

    doc_dominant = [interpret.dominant_topic(row) for row in bundle.theta] \
        if bundle.n_docs else []
    emit("document_map.svg", "document_map", "", render_figure(
        _spec_for("document_map", overrides, "Document map"),
        {"coordinates": maps["documents"]["coordinates"],
         "labels": [d.id for d in bundle.documents],
         "dominant": doc_dominant}))

    if cache.get("groups"):
        g = cache["groups"]
        g_dominant = [interpret.dominant_topic(np.asarray(row))
                      for row in g["values"]]
        emit("group_map.svg", "group_map", "", render_figure(
            _spec_for("group_map", overrides, "Group map"),
            {"coordinates": maps["groups"]["coordinates"],
             "labels": g["labels"],
             "dominant": g_dominant}))
    else:
        skipped.append({"kind": "group_map", "subject": "",
                        "reason": "bundle has no groups"})

    for entry in cache["topics"]:
        t = int(entry["topic_id"])
        terms = [bundle.vocabulary[i] for i, _ in entry["top_terms"]]
        weights = [w for _, w in entry["top_terms"]]
        emit(f"term_bars/topic_{t}.svg", "term_bars", str(t), render_figure(
            _spec_for("term_bars", overrides, topic_names[t]),
            {"terms": terms, "weights": weights, "color_index": t}))

    for t in range(bundle.n_topics):
        row = np.clip(bundle.phi[t], 0.0, None)
        order = np.argsort(-row, kind="stable")[:100]
        cloud_weights = [(bundle.vocabulary[i], float(row[i]))
                         for i in order if row[i] > 0.0]
        if not cloud_weights:
            skipped.append({"kind": "wordcloud", "subject": str(t),
                            "reason": "no positive term weights"})
            continue
        layout = wordcloud.layout_wordcloud(cloud_weights, 800.0, 500.0, seed)
        emit(f"wordclouds/topic_{t}.svg", "wordcloud", str(t), render_figure(
            _spec_for("wordcloud", overrides, topic_names[t]),
            {"layout": layout}))

    if bundle.has_groups:
        doc_term = effective_doc_term(bundle)
        g = cache["groups"]
        for gi, label in enumerate(g["labels"]):
            counts = interpret.group_wordcloud_weights(
                doc_term, bundle.group_labels, label)
            cloud_weights = [(bundle.vocabulary[i], float(c)) for i, c in counts]
            if not cloud_weights:
                skipped.append({"kind": "wordcloud", "subject": f"group:{label}",
                                "reason": "no term occurrences in group"})
                continue
            layout = wordcloud.layout_wordcloud(cloud_weights, 800.0, 500.0, seed)
            emit(f"wordclouds/group_{gi}.svg", "wordcloud", f"group:{label}",
                 render_figure(_spec_for("wordcloud", overrides, label),
                               {"layout": layout}))
    else:
        skipped.append({"kind": "wordcloud", "subject": "groups",
                        "reason": "bundle has no groups"})

    matcher = tokenize.VocabularyMatcher(bundle.vocabulary)
    for di, doc in enumerate(bundle.documents):
        timeline = interpret.document_timeline(
            matcher.match(doc.text).token_ids, bundle.phi, phi_hat=phi_hat)
        windows = [{
            "token_start": w.token_start,
            "token_end": w.token_end,
            "distribution": [float(v) for v in w.distribution],
            "empty": w.empty,
        } for w in timeline.windows]
        emit(f"timelines/doc_{di}.svg", "timeline", doc.id, render_figure(
            _spec_for("timeline", overrides, doc.id),
            {"windows": windows, "topic_names": topic_names}))

    manifest = {
        "bundle_hash": cache["bundle_hash"],
        "files": files,
        "skipped": skipped,
    }
    (out / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest
