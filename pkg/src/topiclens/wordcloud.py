"""Deterministic wordcloud layout.

Words are sorted largest-first and walked along an Archimedean spiral
from the canvas center until they find a collision-free, fully
in-canvas position.  Sizing, rotation and placement are all pure
functions of the weights, the canvas and the seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from topiclens import _accel

MIN_FONT_SIZE = 10.0


@dataclass(frozen=True)
class WordPlacement:
    term: str
    weight: float
    size: float  # font size in pixels
    x: float  # box center
    y: float
    rotation: int  # degrees, 0 or 90
    box: tuple[float, float, float, float]  # (x0, y0, x1, y1)


@dataclass
class WordcloudLayout:
    width: float
    height: float
    placements: list[WordPlacement] = field(default_factory=list)
    dropped: list[str] = field(default_factory=list)


def font_sizes(weights: np.ndarray, width: float, height: float) -> np.ndarray:
    """min + (max - min) * sqrt(w / w_max) sizing, weight-monotone.

    max_size is 0.15 of the short canvas side, but never below
    MIN_FONT_SIZE so the monotonicity invariant survives tiny canvases.
    """
    w = np.clip(np.asarray(weights, dtype=np.float64), 0.0, None)
    top = w.max()
    max_size = max(0.15 * min(width, height), MIN_FONT_SIZE)
    if top == 0.0:
        return np.full(w.shape, MIN_FONT_SIZE)
    return MIN_FONT_SIZE + (max_size - MIN_FONT_SIZE) * np.sqrt(w / top)


def layout_wordcloud(weights: list[tuple[str, float]], width: float = 800.0,
                     height: float = 500.0, seed: int = 0) -> WordcloudLayout:
    """Place weighted terms on a canvas.

    weights is a list of (term, weight >= 0) pairs with unique terms and
    at least one positive weight.  Placement order is weight-descending
    with ties broken by the term string, so the result does not depend
    on input order.  Each word's 0/90 degree rotation comes from one
    coin flip of a PCG32 stream seeded with (seed, word count).  Words
    whose spiral sweep exits the canvas diagonal are dropped and
    reported in the layout.
    """
    if width <= 0 or height <= 0:
        raise ValueError("canvas dimensions must be positive")
    terms = [t for t, _ in weights]
    if len(set(terms)) != len(terms):
        raise ValueError("terms must be unique")
    if not any(w > 0.0 for _, w in weights):
        raise ValueError("need at least one positive weight")
    if any(w < 0.0 for _, w in weights):
        raise ValueError("weights must be >= 0")

    order = sorted(weights, key=lambda tw: (-tw[1], tw[0]))
    sizes = font_sizes(np.array([w for _, w in order]), width, height)

    rng = _accel.Pcg32(seed, len(order))
    rotations = [90 if rng.next_uint32() & 1 else 0 for _ in order]

    half_w = np.empty(len(order), dtype=np.float64)
    half_h = np.empty(len(order), dtype=np.float64)
    for i, ((term, _), size) in enumerate(zip(order, sizes)):
        # Axis-aligned box estimate: 0.6 em advance per character.
        box_w = 0.6 * size * max(len(term), 1)
        box_h = size
        if rotations[i] == 90:
            box_w, box_h = box_h, box_w
        half_w[i] = box_w * 0.5
        half_h[i] = box_h * 0.5

    xs, ys, placed = _accel.place_boxes(half_w, half_h, float(width), float(height))

    layout = WordcloudLayout(width=float(width), height=float(height))
    for i, (term, w) in enumerate(order):
        if not placed[i]:
            layout.dropped.append(term)
            continue
        layout.placements.append(WordPlacement(
            term=term,
            weight=float(w),
            size=float(sizes[i]),
            x=float(xs[i]),
            y=float(ys[i]),
            rotation=rotations[i],
            box=(float(xs[i] - half_w[i]), float(ys[i] - half_h[i]),
                 float(xs[i] + half_w[i]), float(ys[i] + half_h[i])),
        ))
    return layout
