"""The interpretation cache: every derived artifact, one JSON file.

The cache is keyed by the bundle content hash (which excludes topic
names, so renames never invalidate it) and serialized with sorted keys,
no whitespace and no NaN/Infinity, so identical inputs produce a
byte-identical file.  Default location: <bundle>/.cache/interpretation.json.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from topiclens import interpret, manifold
from topiclens.bundle import CorpusBundle, bundle_hash, doc_lengths

CACHE_VERSION = 1
CACHE_DIR = ".cache"
CACHE_NAME = "interpretation.json"


def cache_path(bundle_path: str | os.PathLike) -> Path:
    return Path(bundle_path) / CACHE_DIR / CACHE_NAME


def _coords(projection: manifold.Projection2D) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in projection.coordinates]


def _map_entry(points: np.ndarray, params: manifold.UmapParams) -> dict:
    projection = manifold.umap_project(points, params)
    return {"coordinates": _coords(projection), "params": projection.params}


def build_cache(bundle: CorpusBundle, params: manifold.UmapParams | None = None,
                seed: int = 0, top_terms: int = 10) -> dict:
    """Compute every derived artifact for a bundle.

    params carries projection overrides; seed overrides params.seed so a
    single flag controls all stochastic stages.
    """
    if params is None:
        params = manifold.UmapParams()
    params.seed = seed

    lengths = doc_lengths(bundle)
    importances = interpret.topic_importance(bundle.theta, lengths)
    summaries = interpret.build_topic_summaries(
        bundle.phi, bundle.theta, lengths, bundle.topic_names, k=top_terms)
    prevalence = interpret.term_prevalence(bundle.phi)

    maps = {
        "topics": _map_entry(np.asarray(bundle.phi), params),
        "words": _map_entry(np.asarray(bundle.phi).T, params),
        "documents": _map_entry(
            np.asarray(bundle.doc_embeddings
                       if bundle.doc_embeddings is not None
                       else bundle.theta),
            params),
    }

    groups = None
    if bundle.has_groups:
        gmat = interpret.group_topic_matrix(bundle.theta, bundle.group_labels)
        groups = {
            "labels": gmat.groups,
            "values": [[float(v) for v in row] for row in gmat.values],
        }
        maps["groups"] = _map_entry(gmat.values, params)

    return {
        "version": CACHE_VERSION,
        "bundle_hash": bundle_hash(bundle.path) if bundle.path else "",
        "seed": int(seed),
        "doc_lengths": [int(v) for v in lengths],
        "topic_importance": [float(v) for v in importances],
        "term_prevalence": [float(v) for v in prevalence],
        "topics": [
            {
                "topic_id": s.topic_id,
                "importance": s.importance,
                "top_terms": [[int(i), float(w)] for i, w in s.top_terms],
                "dominant_doc_count": s.dominant_doc_count,
            }
            for s in summaries
        ],
        "maps": maps,
        "groups": groups,
    }


def dumps_cache(cache: dict) -> bytes:
    """Canonical byte serialization: sorted keys, compact, no NaN."""
    return (json.dumps(cache, sort_keys=True, separators=(",", ":"),
                       allow_nan=False) + "\n").encode("utf-8")


def save_cache(bundle_path: str | os.PathLike, cache: dict) -> Path:
    """Atomically write the cache file; returns its path."""
    target = cache_path(bundle_path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_bytes(dumps_cache(cache))
    os.replace(tmp, target)
    return target


def load_cache(bundle_path: str | os.PathLike) -> dict | None:
    """Load the cache file if present and parseable, else None."""
    target = cache_path(bundle_path)
    if not target.is_file():
        return None
    try:
        cache = json.loads(target.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, OSError):
        return None
    if not isinstance(cache, dict) or cache.get("version") != CACHE_VERSION:
        return None
    return cache


def is_fresh(cache: dict | None, bundle_path: str | os.PathLike) -> bool:
    """True when the cache's recorded hash matches the files on disk."""
    if cache is None:
        return False
    return cache.get("bundle_hash") == bundle_hash(bundle_path)


def ensure_cache(bundle: CorpusBundle,
                 params: manifold.UmapParams | None = None,
                 seed: int = 0, force: bool = False) -> dict:
    """Return a fresh cache, computing and persisting it when needed.

    An existing on-disk cache is reused whenever its hash matches,
    regardless of how it was parameterized: the recorded params are
    authoritative for the artifacts inside.
    """
    if bundle.path is not None and not force:
        cache = load_cache(bundle.path)
        if is_fresh(cache, bundle.path):
            return cache
    cache = build_cache(bundle, params=params, seed=seed)
    if bundle.path is not None:
        save_cache(bundle.path, cache)
    return cache
