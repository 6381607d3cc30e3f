import math

import numpy as np
import pytest

from topiclens.wordcloud import (
    MIN_FONT_SIZE,
    font_sizes,
    layout_wordcloud,
)


def _boxes_overlap(a, b):
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    return ax0 < bx1 and bx0 < ax1 and ay0 < by1 and by0 < ay1


def test_font_sizes_scale_with_sqrt_weight():
    sizes = font_sizes(np.array([4.0, 1.0, 0.0]), 800, 500)
    max_size = max(0.15 * 500, 10.0)
    assert sizes[0] == pytest.approx(max_size)
    expected_mid = 10.0 + (max_size - 10.0) * math.sqrt(1.0 / 4.0)
    assert sizes[1] == pytest.approx(expected_mid)
    assert sizes[2] == pytest.approx(MIN_FONT_SIZE)


def test_font_sizes_all_zero_weights():
    assert list(font_sizes(np.array([0.0, 0.0]), 800, 500)) == [10.0, 10.0]


def test_font_sizes_floor_on_tiny_canvas():
    # 0.15 * min(40, 30) = 4.5 < 10, so the cap clamps up to the minimum.
    assert list(font_sizes(np.array([5.0, 1.0]), 40, 30)) == [10.0, 10.0]


def test_single_word_centered():
    layout = layout_wordcloud([("solo", 3.0)], 640, 480, seed=0)
    assert layout.dropped == []
    (p,) = layout.placements
    assert (p.x, p.y) == (320.0, 240.0)
    assert p.term == "solo"
    x0, y0, x1, y1 = p.box
    assert (x0 + x1) / 2 == pytest.approx(320.0)
    assert (y0 + y1) / 2 == pytest.approx(240.0)


def test_equal_weights_equal_sizes():
    layout = layout_wordcloud([("aa", 2.0), ("bb", 2.0), ("cc", 2.0)],
                              500, 400, seed=1)
    sizes = {p.size for p in layout.placements}
    assert len(sizes) == 1


def test_placements_sorted_by_weight_then_term():
    layout = layout_wordcloud([("zig", 1.0), ("app", 3.0), ("mid", 1.0)],
                              600, 400, seed=2)
    placed = [p.term for p in layout.placements]
    assert placed == ["app", "mid", "zig"]


@pytest.mark.parametrize("seed", range(20))
def test_no_overlap_and_in_canvas_random(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 301))
    weights = rng.random(n) * 10.0
    weights[int(rng.integers(n))] = 10.0
    pairs = [(f"w{i}", float(weights[i])) for i in range(n)]
    width, height = 900.0, 600.0
    layout = layout_wordcloud(pairs, width, height, seed=seed)
    boxes = [p.box for p in layout.placements]
    for box in boxes:
        x0, y0, x1, y1 = box
        assert x0 >= 0.0 and y0 >= 0.0
        assert x1 <= width and y1 <= height
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            assert not _boxes_overlap(boxes[i], boxes[j])
    assert len(layout.placements) + len(layout.dropped) == n


def test_seed_determinism():
    pairs = [(f"word{i}", float((i * 7) % 13 + 1)) for i in range(60)]
    a = layout_wordcloud(pairs, 700, 500, seed=9)
    b = layout_wordcloud(pairs, 700, 500, seed=9)
    assert a == b
    c = layout_wordcloud(pairs, 700, 500, seed=10)
    rots_a = [p.rotation for p in a.placements]
    rots_c = [p.rotation for p in c.placements]
    assert rots_a != rots_c  # different seed flips some rotation coins


def test_input_order_does_not_matter():
    pairs = [("gamma", 2.0), ("alpha", 5.0), ("beta", 2.0), ("delta", 1.0)]
    fwd = layout_wordcloud(pairs, 600, 400, seed=3)
    rev = layout_wordcloud(pairs[::-1], 600, 400, seed=3)
    assert fwd == rev


def test_tiny_canvas_drops_words():
    pairs = [(f"longword{i}", float(i + 1)) for i in range(50)]
    layout = layout_wordcloud(pairs, 60, 40, seed=4)
    assert layout.dropped
    assert len(layout.placements) + len(layout.dropped) == 50
    names = {t for t, _ in pairs}
    for term in layout.dropped:
        assert term in names


def test_rotation_swaps_box_dimensions():
    pairs = [(f"t{i}", 1.0) for i in range(40)]
    layout = layout_wordcloud(pairs, 800, 600, seed=5)
    saw_rotated = saw_flat = False
    for p in layout.placements:
        x0, y0, x1, y1 = p.box
        w, h = x1 - x0, y1 - y0
        expected_w = 0.6 * p.size * len(p.term)
        if p.rotation == 90:
            saw_rotated = True
            assert h == pytest.approx(expected_w)
            assert w == pytest.approx(p.size)
        else:
            saw_flat = True
            assert w == pytest.approx(expected_w)
            assert h == pytest.approx(p.size)
    assert saw_rotated and saw_flat


def test_validation_errors():
    with pytest.raises(ValueError):
        layout_wordcloud([("a", 1.0)], 0, 100)
    with pytest.raises(ValueError):
        layout_wordcloud([("a", 1.0), ("a", 2.0)], 100, 100)
    with pytest.raises(ValueError):
        layout_wordcloud([("a", -1.0)], 100, 100)
    with pytest.raises(ValueError):
        layout_wordcloud([("a", 0.0), ("b", 0.0)], 100, 100)
    with pytest.raises(ValueError):
        layout_wordcloud([], 100, 100)
