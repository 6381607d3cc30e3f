"""Release gate: each test prints a PASS/FAIL line for one criterion."""

import hashlib
import json
import math
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import pytest
from scipy import sparse
from scipy.optimize import curve_fit

from topiclens import interpret, tokenize
from topiclens.bundle import load_bundle
from topiclens.manifold import (
    UmapParams,
    fit_ab,
    fuzzy_union,
    smooth_knn,
    umap_project,
)
from topiclens.wordcloud import layout_wordcloud

from conftest import build_bundle


@pytest.fixture
def announce(capsys):
    def _announce(criterion, ok):
        with capsys.disabled():
            print(f"{'PASS' if ok else 'FAIL'}: {criterion}", flush=True)
    return _announce


def _run_cli(*argv):
    import os

    env = {k: os.environ[k] for k in ("PATH", "PYTHONPATH", "HOME", "LANG")
           if k in os.environ}
    env["NO_COLOR"] = "1"
    return subprocess.run(
        [sys.executable, "-m", "topiclens.cli", *map(str, argv)],
        capture_output=True, text=True, env=env)


def test_formula_oracles_exact(announce):
    ok = False
    try:
        rng = np.random.default_rng(100)
        start = time.perf_counter()
        for _ in range(100):
            n_docs = int(rng.integers(1, 51))
            n_topics = int(rng.integers(1, 11))
            theta = rng.random((n_docs, n_topics))
            lengths = rng.integers(0, 500, size=n_docs)

            expected = np.zeros(n_topics)
            for d in range(n_docs):
                for t in range(n_topics):
                    expected[t] += theta[d, t] * lengths[d]
            got = interpret.topic_importance(theta, lengths)
            assert np.allclose(got, expected, rtol=1e-12, atol=1e-12)

            labels = [f"g{rng.integers(0, 4)}" for _ in range(n_docs)]
            gmat = interpret.group_topic_matrix(theta, labels)
            for gi, label in enumerate(gmat.groups):
                brute = np.zeros(n_topics)
                for d in range(n_docs):
                    if labels[d] == label:
                        brute += theta[d]
                assert np.array_equal(gmat.values[gi], brute) or \
                    np.allclose(gmat.values[gi], brute, rtol=0, atol=0)
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"oracle loop took {elapsed:.2f}s"
        ok = True
    finally:
        announce("formula oracles match brute force on 100 instances "
                 "in under 1s", ok)


def test_smooth_knn_residuals(announce):
    ok = False
    try:
        rng = np.random.default_rng(101)
        clamp_hits = 0
        for i in range(1000):
            k = int(rng.integers(2, 51))
            if i % 50 == 0:
                d = np.full(k, float(rng.random() + 0.1))  # forces the clamp
            else:
                d = np.sort(rng.random(k) * 10.0 + 1e-6)
            target = math.log2(k)
            rho, sigma, clamped = smooth_knn(d, 1)
            if clamped:
                clamp_hits += 1
                assert sigma > 0.0
                continue
            residual = abs(
                np.exp(-np.maximum(d - rho, 0.0) / sigma).sum() - target)
            assert residual <= 1e-5, f"residual {residual} on vector {i}"
        assert clamp_hits >= 20  # every degenerate vector was detected
        ok = True
    finally:
        announce("smooth_knn residual <= 1e-5 on 1000 vectors with clamps "
                 "detected", ok)


def test_fit_ab_oracle_grid(announce):
    ok = False
    try:
        for min_dist in (0.01, 0.1, 0.25, 0.5):
            for spread in (1.0, 1.5):
                xv = 3.0 * spread * np.arange(1, 301) / 300
                yv = np.where(xv <= min_dist, 1.0,
                              np.exp(-(xv - min_dist) / spread))
                (oa, ob), _ = curve_fit(
                    lambda x, a, b: 1.0 / (1.0 + a * x ** (2.0 * b)),
                    xv, yv, p0=(1.0, 1.0), maxfev=10000)
                a, b = fit_ab(min_dist, spread)
                assert abs(a - oa) <= 1e-3, (min_dist, spread, a, oa)
                assert abs(b - ob) <= 1e-3, (min_dist, spread, b, ob)
        a, b = fit_ab(0.1, 1.0)
        assert abs(a - 1.577) <= 1e-2
        assert abs(b - 0.895) <= 1e-2
        ok = True
    finally:
        announce("fit_ab reproduces least-squares oracle within 1e-3 and "
                 "canonical (1.577, 0.895) within 1e-2", ok)


def test_projection_quality(announce):
    ok = False
    try:
        start = time.perf_counter()
        rng = np.random.default_rng(102)
        direction = rng.normal(size=20)
        direction /= np.linalg.norm(direction)
        pts = np.vstack([
            rng.normal(size=(100, 20)) + 3.0 * direction,
            rng.normal(size=(100, 20)) - 3.0 * direction,
        ])  # centers 6 sigma apart
        labels = np.array([0] * 100 + [1] * 100)
        proj = umap_project(pts, UmapParams(seed=7))
        coords = proj.coordinates
        same = 0
        for i in range(200):
            d = np.linalg.norm(coords - coords[i], axis=1)
            d[i] = np.inf
            same += labels[int(np.argmin(d))] == labels[i]
        rate = same / 200
        assert rate >= 0.9, f"same-cluster NN rate {rate}"
        c0 = coords[:100].mean(axis=0)
        c1 = coords[100:].mean(axis=0)
        spread0 = np.linalg.norm(coords[:100] - c0, axis=1).mean()
        spread1 = np.linalg.norm(coords[100:] - c1, axis=1).mean()
        assert np.linalg.norm(c0 - c1) > max(spread0, spread1)
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"projection took {elapsed:.2f}s"
        ok = True
    finally:
        announce("two-cluster projection: >=90% same-cluster neighbors, "
                 "centroids separated, under 10s", ok)


def test_compute_and_figures_deterministic(announce, tmp_path):
    ok = False
    try:
        digests = []
        for sub in ("one", "two"):
            path = build_bundle(tmp_path / sub)
            result = _run_cli("compute", path, "--seed", "7")
            assert result.returncode == 0, result.stderr
            blob = (path / ".cache" / "interpretation.json").read_bytes()
            digests.append(hashlib.sha256(blob).hexdigest())
        assert digests[0] == digests[1]

        bundle_path = tmp_path / "one"
        outs = []
        for sub in ("figs_a", "figs_b"):
            out = tmp_path / sub
            result = _run_cli("figures", bundle_path, out)
            assert result.returncode == 0, result.stderr
            outs.append(out)
        svgs = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*.svg"))
        assert svgs
        for rel in svgs:
            assert (outs[0] / rel).read_bytes() == (outs[1] / rel).read_bytes()
        ok = True
    finally:
        announce("compute --seed 7 caches and repeated SVG exports are "
                 "byte-identical", ok)


def test_fuzzy_graph_properties(announce):
    ok = False
    try:
        rng = np.random.default_rng(103)
        for _ in range(100):
            n = int(rng.integers(2, 40))
            dense = rng.random((n, n)) * (rng.random((n, n)) < 0.4)
            np.fill_diagonal(dense, 0.0)
            arr = fuzzy_union(sparse.csr_matrix(dense)).toarray()
            assert np.array_equal(arr, arr.T)
            assert arr.min() >= 0.0
            assert arr.max() <= 1.0
        ok = True
    finally:
        announce("fuzzy union exactly symmetric with weights in [0,1] on "
                 "100 random graphs", ok)


def test_wordcloud_layout_contracts(announce):
    ok = False
    try:
        width, height = 900.0, 600.0
        for seed in range(20):
            rng = np.random.default_rng(200 + seed)
            weights = rng.random(300) * 5.0
            weights[0] = 5.0
            pairs = [(f"term{i}", float(weights[i])) for i in range(300)]
            layout = layout_wordcloud(pairs, width, height, seed=seed)
            boxes = [p.box for p in layout.placements]
            for x0, y0, x1, y1 in boxes:
                assert 0.0 <= x0 and 0.0 <= y0
                assert x1 <= width and y1 <= height
            for i in range(len(boxes)):
                ax0, ay0, ax1, ay1 = boxes[i]
                for j in range(i + 1, len(boxes)):
                    bx0, by0, bx1, by1 = boxes[j]
                    overlap = (ax0 < bx1 and bx0 < ax1
                               and ay0 < by1 and by0 < ay1)
                    assert not overlap, (i, j, seed)
        ok = True
    finally:
        announce("300-word layouts have no overlaps or out-of-canvas boxes "
                 "across 20 seeds", ok)


def test_highlight_and_timeline_contracts(announce):
    ok = False
    try:
        rng = np.random.default_rng(104)
        pool = [f"w{i}" for i in range(18)] + ["café", "naïve"]
        for trial in range(50):
            m = int(rng.integers(3, len(pool) + 1))
            vocab = list(rng.choice(pool, size=m, replace=False))
            n_topics = int(rng.integers(1, 5))
            phi = rng.random((n_topics, m)) - 0.2  # some negatives
            words = [str(rng.choice(vocab + ["zzz", "qq"]))
                     for _ in range(int(rng.integers(0, 120)))]
            text = " ".join(words)
            matcher = tokenize.VocabularyMatcher(vocab)
            matched = matcher.match(text)
            raw = text.encode("utf-8")
            topic = int(rng.integers(0, n_topics))
            spans = interpret.document_highlights(matched, phi, topic)
            prev_end = -1
            for s in spans:
                assert 0 <= s.start < s.end <= len(raw)
                assert s.start >= prev_end  # sorted and disjoint
                prev_end = s.end
                assert raw[s.start:s.end].decode("utf-8") == vocab[s.term_index]
                assert s.weight > 0.0
            timeline = interpret.document_timeline(matched.token_ids, phi)
            for w in timeline.windows:
                if not w.empty:
                    assert abs(sum(w.distribution) - 1.0) <= 1e-9
                assert w.token_start < w.token_end
        ok = True
    finally:
        announce("highlights in-bounds, disjoint and retokenizable; "
                 "timeline windows sum to 1 within 1e-9 on 50 corpora", ok)


def test_api_rename_round_trip_and_storm(announce, tmp_path):
    ok = False
    try:
        from fastapi.testclient import TestClient
        from topiclens.server import create_app

        path = build_bundle(tmp_path / "api_bundle")
        params = UmapParams(n_neighbors=3, epochs=30)

        with TestClient(create_app(str(path), params=params,
                                   precompute=True)) as client:
            resp = client.patch("/api/topics/0/name",
                                json={"name": "Persisted"})
            assert resp.status_code == 200
        with TestClient(create_app(str(path), params=params)) as reopened:
            assert reopened.get("/api/topics/0").json()["name"] == "Persisted"

            requested = [f"storm-{i}" for i in range(100)]

            def rename(name):
                return reopened.patch("/api/topics/1/name",
                                      json={"name": name})

            with ThreadPoolExecutor(max_workers=16) as pool:
                responses = list(pool.map(rename, requested))
            assert all(r.status_code == 200 for r in responses)
        stored = json.loads((path / "topic_names.json").read_text("utf-8"))
        assert isinstance(stored, list) and len(stored) == 3
        assert stored[0] == "Persisted"
        assert stored[1] in requested  # some serialization of the requests
        ok = True
    finally:
        announce("rename persists across restart and a 100-request storm "
                 "leaves a valid names file", ok)


def test_suite_runs_without_dashboard(announce, tmp_path):
    ok = False
    try:
        from fastapi.testclient import TestClient
        from topiclens.server import create_app

        path = build_bundle(tmp_path / "plain_bundle")
        empty_static = tmp_path / "no_assets"
        empty_static.mkdir()
        app = create_app(str(path), params=UmapParams(n_neighbors=3, epochs=30),
                         precompute=True, static_dir=str(empty_static))
        with TestClient(app) as client:
            for url in ("/api/meta", "/api/topics", "/api/topics/0",
                        "/api/topics/0/wordcloud", "/api/maps/topics",
                        "/api/maps/words", "/api/maps/documents",
                        "/api/maps/groups", "/api/words/0", "/api/documents/d0",
                        "/api/groups", "/api/groups/g0"):
                assert client.get(url).status_code == 200, url
            index = client.get("/")
            assert index.status_code == 200  # inline page, no built assets
            assert "api/meta" in index.text
        ok = True
    finally:
        announce("full API functions with no dashboard assets built", ok)
