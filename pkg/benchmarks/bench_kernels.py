"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each hot kernel on identical inputs through both backends, checks
that the outputs match bit for bit, and prints a timing table.

    python3 benchmarks/bench_kernels.py [--points 800] [--epochs 200]
"""

import argparse
import time

import numpy as np

from topiclens._accel import _core_py
from topiclens.manifold import UmapParams, fuzzy_graph, initialize_layout

try:
    from topiclens._accel import _core
except ImportError:
    _core = None


def _time(fn, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def _layout_inputs(n_points, epochs, seed=0):
    rng = np.random.default_rng(seed)
    points = rng.normal(size=(n_points, 16))
    params = UmapParams(seed=seed)
    graph = fuzzy_graph(points, params.n_neighbors, metric="cosine")
    init = initialize_layout(graph, mode="random", seed=seed)
    coo = graph.weights.tocoo()
    mask = coo.data > 0.0
    order = np.lexsort((coo.col[mask], coo.row[mask]))
    heads = coo.row[mask][order].astype(np.int64)
    tails = coo.col[mask][order].astype(np.int64)
    weights = coo.data[mask][order]
    eps = weights.max() / weights
    return init, heads, tails, eps, epochs


def bench_layout(backend, inputs):
    init, heads, tails, eps, epochs = inputs

    def run():
        return backend.optimize_embedding(
            init.copy(), heads, tails, eps.copy(), 1.577, 0.895,
            epochs, 1.0, 5, 0, init.shape[0])

    return _time(run)


def bench_place_boxes(backend, n_words, seed=0):
    rng = np.random.default_rng(seed)
    sizes = 10.0 + 60.0 * np.sqrt(rng.random(n_words))
    half_w = 0.6 * sizes * rng.integers(2, 12, size=n_words) / 2.0
    half_h = sizes / 2.0

    def run():
        return backend.place_boxes(half_w, half_h, 900.0, 600.0)

    return _time(run)


def bench_pcg(backend, draws):
    def run():
        rng = backend.Pcg32(42, 54)
        total = 0
        for _ in range(draws):
            total = (total + rng.next_uint32()) & 0xFFFFFFFF
        return total

    return _time(run)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=800)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--words", type=int, default=400)
    parser.add_argument("--draws", type=int, default=200_000)
    args = parser.parse_args()

    if _core is None:
        print("compiled backend unavailable; build it with "
              "`pip install -e . --no-build-isolation`")
        return 1

    rows = []
    layout_inputs = _layout_inputs(args.points, args.epochs)

    for name, fn in (
        (f"sgd layout ({args.points} pts, {args.epochs} epochs)",
         lambda b: bench_layout(b, layout_inputs)),
        (f"wordcloud placement ({args.words} words)",
         lambda b: bench_place_boxes(b, args.words)),
        (f"pcg32 stream ({args.draws} draws)",
         lambda b: bench_pcg(b, args.draws)),
    ):
        t_c, out_c = fn(_core)
        t_py, out_py = fn(_core_py)
        if isinstance(out_c, tuple):
            matches = all(np.array_equal(a, b) for a, b in zip(out_c, out_py))
        else:
            matches = out_c == out_py
        rows.append((name, t_c, t_py, matches))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'compiled':>10}  {'python':>10}  "
          f"{'speedup':>8}  match")
    for name, t_c, t_py, matches in rows:
        print(f"{name:<{width}}  {t_c * 1e3:>8.1f}ms  {t_py * 1e3:>8.1f}ms  "
              f"{t_py / t_c:>7.1f}x  {'yes' if matches else 'NO'}")
    return 0 if all(r[3] for r in rows) else 2


if __name__ == "__main__":
    raise SystemExit(main())
