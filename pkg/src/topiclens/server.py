"""HTTP+JSON API over a bundle and its interpretation cache.

One process serves one bundle.  Every GET is a pure read; the single
mutation is topic renaming, serialized by a lock and persisted with an
atomic file replace so concurrent renames are never lost and readers
never observe a torn file.  Responses carry the bundle content hash in
the X-Bundle-Hash header; if the files on disk stop matching the loaded
bundle, API calls answer 409 until the server is restarted.
"""

from __future__ import annotations

import threading
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from topiclens import cache as cache_mod
from topiclens import interpret, manifold, tokenize, wordcloud
from topiclens.bundle import (
    CorpusBundle,
    bundle_hash,
    effective_doc_term,
    load_bundle,
    save_topic_names,
    validate_bundle,
)

MAX_NAME_LENGTH = 200
MAP_KINDS = ("topics", "words", "documents", "groups")


class InvalidBundleError(Exception):
    """Startup refused: the bundle failed validation."""

    def __init__(self, report):
        lines = [f"{i.code}: {i.message}" for i in report.errors]
        super().__init__("bundle failed validation: " + "; ".join(lines))
        self.report = report


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _not_found(code: str, message: str) -> ApiError:
    return ApiError(404, code, message)


class RenameRequest(BaseModel):
    name: str


class _Session:
    """Mutable server state: the bundle, its cache, and the locks."""

    def __init__(self, bundle: CorpusBundle, seed: int,
                 params: manifold.UmapParams | None):
        self.bundle = bundle
        self.hash = bundle_hash(bundle.path)
        self.seed = seed
        self.params = params
        self.cache: dict | None = None
        self.names_lock = threading.Lock()
        self.cache_lock = threading.Lock()
        self.derived_lock = threading.Lock()
        self._matcher: tokenize.VocabularyMatcher | None = None
        self._phi_hat: np.ndarray | None = None
        self._doc_term = None
        self._pca_maps: dict[str, dict] = {}

    def check_fresh(self) -> None:
        if bundle_hash(self.bundle.path) != self.hash:
            raise ApiError(409, "stale_bundle",
                           "bundle files changed on disk; restart the server")

    def get_cache(self) -> dict:
        # Concurrent requests for an unbuilt cache block here until the
        # first builder finishes (the documented "wait" behavior).
        with self.cache_lock:
            if self.cache is None:
                self.cache = cache_mod.ensure_cache(
                    self.bundle, params=self.params, seed=self.seed)
            if self.cache.get("bundle_hash") != self.hash:
                raise ApiError(409, "stale_cache",
                               "cache does not match the bundle files")
            return self.cache

    @property
    def matcher(self) -> tokenize.VocabularyMatcher:
        with self.derived_lock:
            if self._matcher is None:
                self._matcher = tokenize.VocabularyMatcher(self.bundle.vocabulary)
            return self._matcher

    @property
    def phi_hat(self) -> np.ndarray:
        with self.derived_lock:
            if self._phi_hat is None:
                self._phi_hat = interpret.clamped_column_normalized(self.bundle.phi)
            return self._phi_hat

    @property
    def doc_term(self):
        with self.derived_lock:
            if self._doc_term is None:
                self._doc_term = effective_doc_term(self.bundle)
            return self._doc_term

    def map_features(self, kind: str) -> np.ndarray:
        bundle = self.bundle
        if kind == "topics":
            return np.asarray(bundle.phi, dtype=np.float64)
        if kind == "words":
            return np.asarray(bundle.phi, dtype=np.float64).T
        if kind == "documents":
            if bundle.doc_embeddings is not None:
                return np.asarray(bundle.doc_embeddings, dtype=np.float64)
            return np.asarray(bundle.theta, dtype=np.float64)
        gmat = interpret.group_topic_matrix(bundle.theta, bundle.group_labels)
        return gmat.values

    def pca_map(self, kind: str) -> dict:
        with self.derived_lock:
            if kind not in self._pca_maps:
                projection = manifold.pca_project(self.map_features(kind))
                self._pca_maps[kind] = {
                    "coordinates": [[float(x), float(y)]
                                    for x, y in projection.coordinates],
                    "params": projection.params,
                }
            return self._pca_maps[kind]


def _topic_payload(session: _Session, entry: dict) -> dict:
    bundle = session.bundle
    t = int(entry["topic_id"])
    return {
        "topic_id": t,
        "name": bundle.topic_names[t],
        "importance": entry["importance"],
        "top_terms": [
            {"term_index": i, "term": bundle.vocabulary[i], "weight": w}
            for i, w in entry["top_terms"]
        ],
        "dominant_doc_count": entry["dominant_doc_count"],
    }


def _map_labels(session: _Session, kind: str) -> list[str]:
    bundle = session.bundle
    if kind == "topics":
        return list(bundle.topic_names)
    if kind == "words":
        return list(bundle.vocabulary)
    if kind == "documents":
        return [d.id for d in bundle.documents]
    return session.get_cache()["groups"]["labels"]


def _map_dominant(session: _Session, kind: str) -> list[int]:
    bundle = session.bundle
    if kind == "topics":
        return list(range(bundle.n_topics))
    if kind == "words":
        if not bundle.n_terms:
            return []
        return [int(d) for d in np.argmax(session.phi_hat, axis=0)]
    if kind == "documents":
        return [interpret.dominant_topic(row) for row in bundle.theta]
    values = session.get_cache()["groups"]["values"]
    return [interpret.dominant_topic(np.asarray(row)) for row in values]


def _resolve_group(session: _Session, group_id: str) -> int:
    labels = session.get_cache()["groups"]["labels"]
    if group_id in labels:
        return labels.index(group_id)
    if group_id.isdigit() and int(group_id) < len(labels):
        return int(group_id)
    raise _not_found("unknown_group", f"no group {group_id!r}")


def create_app(bundle_path: str, precompute: bool = False, seed: int = 0,
               params: manifold.UmapParams | None = None,
               static_dir: str | None = None) -> FastAPI:
    """Build the API app for one bundle directory.

    Raises BundleError or InvalidBundleError when the bundle cannot be
    served.  With precompute=True the interpretation cache is built (or
    loaded) before the app is returned; otherwise the first request
    needing it triggers the computation and concurrent requests wait.
    """
    bundle = load_bundle(bundle_path)
    report = validate_bundle(bundle)
    if not report.ok:
        raise InvalidBundleError(report)
    session = _Session(bundle, seed, params)
    if precompute:
        session.get_cache()

    app = FastAPI(title="topiclens", docs_url=None, redoc_url=None)
    app.state.session = session

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
            headers={"X-Bundle-Hash": session.hash})

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": {"code": "http_error", "message": str(exc.detail)}},
            headers={"X-Bundle-Hash": session.hash})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "validation_error", "message": str(exc)}},
            headers={"X-Bundle-Hash": session.hash})

    @app.middleware("http")
    async def _hash_header(request: Request, call_next):
        response = await call_next(request)
        response.headers.setdefault("X-Bundle-Hash", session.hash)
        return response

    @app.get("/api/meta")
    def meta():
        session.check_fresh()
        return {
            "n_topics": bundle.n_topics,
            "n_docs": bundle.n_docs,
            "n_terms": bundle.n_terms,
            "has_groups": bundle.has_groups,
            "bundle_hash": session.hash,
        }

    @app.get("/api/topics")
    def topics():
        session.check_fresh()
        return [_topic_payload(session, e) for e in session.get_cache()["topics"]]

    def _topic_or_404(topic_id: int) -> dict:
        entries = session.get_cache()["topics"]
        if not 0 <= topic_id < len(entries):
            raise _not_found("unknown_topic", f"no topic {topic_id}")
        return entries[topic_id]

    @app.get("/api/topics/{topic_id}")
    def topic_detail(topic_id: int):
        session.check_fresh()
        return _topic_payload(session, _topic_or_404(topic_id))

    @app.patch("/api/topics/{topic_id}/name")
    def rename_topic(topic_id: int, body: RenameRequest):
        session.check_fresh()
        if not 0 <= topic_id < session.bundle.n_topics:
            raise _not_found("unknown_topic", f"no topic {topic_id}")
        name = body.name
        if not name.strip():
            raise ApiError(422, "invalid_name", "name must be non-empty")
        if len(name) > MAX_NAME_LENGTH:
            raise ApiError(
                422, "invalid_name",
                f"name exceeds {MAX_NAME_LENGTH} characters ({len(name)})")
        # Concurrent renames are serialized here, never refused, so any
        # interleaving ends with the last write per topic persisted.
        with session.names_lock:
            names = list(session.bundle.topic_names)
            names[topic_id] = name
            session.bundle = save_topic_names(session.bundle, names)
        return _topic_payload(session, _topic_or_404(topic_id))

    @app.get("/api/topics/{topic_id}/wordcloud")
    def topic_wordcloud(topic_id: int):
        session.check_fresh()
        _topic_or_404(topic_id)
        row = np.clip(np.asarray(session.bundle.phi[topic_id]), 0.0, None)
        order = np.argsort(-row, kind="stable")[:100]
        weights = [(session.bundle.vocabulary[i], float(row[i]))
                   for i in order if row[i] > 0.0]
        if not weights:
            return {"topic_id": topic_id, "placements": [], "dropped": [],
                    "empty": True}
        layout = wordcloud.layout_wordcloud(weights, 800.0, 500.0, session.seed)
        return {
            "topic_id": topic_id,
            "width": layout.width,
            "height": layout.height,
            "empty": False,
            "placements": [
                {"term": p.term, "weight": p.weight, "size": p.size,
                 "x": p.x, "y": p.y, "rotation": p.rotation, "box": list(p.box)}
                for p in layout.placements
            ],
            "dropped": layout.dropped,
        }

    @app.get("/api/maps/{kind}")
    def map_endpoint(kind: str, fallback: str | None = None):
        session.check_fresh()
        if kind not in MAP_KINDS:
            raise _not_found("unknown_map", f"no map kind {kind!r}")
        if kind == "groups" and not session.bundle.has_groups:
            raise _not_found("no_groups", "bundle has no group labels")
        if fallback is not None and fallback != "pca":
            raise ApiError(422, "invalid_fallback",
                           f"unsupported fallback {fallback!r}")
        if fallback == "pca":
            entry = session.pca_map(kind)
        else:
            entry = session.get_cache()["maps"][kind]
        return {
            "kind": kind,
            "coordinates": entry["coordinates"],
            "params": entry["params"],
            "labels": _map_labels(session, kind),
            "dominant": _map_dominant(session, kind),
            "bundle_hash": session.hash,
        }

    @app.get("/api/words/{term_id}")
    def word_detail(term_id: int, n_assoc: int = 20):
        session.check_fresh()
        bundle = session.bundle
        if not 0 <= term_id < bundle.n_terms:
            raise _not_found("unknown_term", f"no term {term_id}")
        if n_assoc < 1:
            raise ApiError(422, "invalid_n_assoc", "n_assoc must be >= 1")
        result = interpret.nearest_words(bundle.phi, term_id, n_assoc)
        members = [term_id] + [i for i, _ in result.neighbors]
        dist = interpret.word_topic_distribution(bundle.phi, members)
        return {
            "term_index": term_id,
            "term": bundle.vocabulary[term_id],
            "zero_norm": result.zero_norm,
            "associations": [
                {"term_index": i, "term": bundle.vocabulary[i], "similarity": s}
                for i, s in result.neighbors
            ],
            "distribution": {
                "values": [float(v) for v in dist.values],
                "undefined": dist.undefined,
            },
        }

    @app.get("/api/documents/{doc_id}")
    def document_detail(doc_id: str, snippet_chars: int = 1000,
                        window: int = 50, stride: int = 25,
                        topic: int | None = None):
        session.check_fresh()
        bundle = session.bundle
        index = bundle.doc_index()
        if doc_id not in index:
            raise _not_found("unknown_document", f"no document {doc_id!r}")
        if snippet_chars < 0:
            raise ApiError(422, "invalid_snippet_chars",
                           "snippet_chars must be >= 0")
        if window < 1 or stride < 1:
            raise ApiError(422, "invalid_window",
                           "window and stride must be >= 1")
        di = index[doc_id]
        doc = bundle.documents[di]
        theta_row = np.asarray(bundle.theta[di], dtype=np.float64)
        dominant = interpret.dominant_topic(theta_row)
        highlight_topic = dominant if topic is None else topic
        if not 0 <= highlight_topic < bundle.n_topics:
            raise _not_found("unknown_topic", f"no topic {highlight_topic}")

        matched = session.matcher.match(doc.text)
        cut = tokenize.snippet_cut(matched, snippet_chars)
        snippet = doc.text[:cut]
        snippet_bytes = len(snippet.encode("utf-8"))
        spans = interpret.document_highlights(
            matched, bundle.phi, highlight_topic, phi_hat=session.phi_hat)
        timeline = interpret.document_timeline(
            matched.token_ids, bundle.phi, window=window, stride=stride,
            phi_hat=session.phi_hat)
        return {
            "doc_id": doc_id,
            "group": doc.group,
            "snippet": snippet,
            "snippet_bytes": snippet_bytes,
            "dominant_topic": dominant,
            "highlight_topic": highlight_topic,
            "topic_distribution": [float(v) for v in theta_row],
            "highlights": [
                {"start": s.start, "end": s.end, "term_index": s.term_index,
                 "term": bundle.vocabulary[s.term_index], "weight": s.weight}
                for s in spans if s.end <= snippet_bytes
            ],
            "timeline": [
                {"token_start": w.token_start, "token_end": w.token_end,
                 "distribution": [float(v) for v in w.distribution],
                 "empty": w.empty}
                for w in timeline.windows
            ],
        }

    @app.get("/api/groups")
    def groups():
        session.check_fresh()
        if not session.bundle.has_groups:
            raise _not_found("no_groups", "bundle has no group labels")
        g = session.get_cache()["groups"]
        totals = [float(sum(row)) for row in g["values"]]
        return [
            {"id": i, "label": label, "theta_total": totals[i]}
            for i, label in enumerate(g["labels"])
        ]

    @app.get("/api/groups/{group_id}")
    def group_detail(group_id: str):
        session.check_fresh()
        if not session.bundle.has_groups:
            raise _not_found("no_groups", "bundle has no group labels")
        g = session.get_cache()["groups"]
        gi = _resolve_group(session, group_id)
        label = g["labels"][gi]
        row = [float(v) for v in g["values"][gi]]
        total = sum(row)
        if total > 0.0:
            normalized = [v / total for v in row]
            undefined = False
        else:
            normalized = [1.0 / len(row) if row else 0.0] * len(row)
            undefined = True
        counts = interpret.group_wordcloud_weights(
            session.doc_term, session.bundle.group_labels, label)
        return {
            "id": gi,
            "label": label,
            "row": row,
            "normalized": normalized,
            "undefined": undefined,
            "wordcloud": [
                {"term_index": i, "term": session.bundle.vocabulary[i],
                 "count": c}
                for i, c in counts
            ],
        }

    static_root = Path(static_dir) if static_dir else \
        Path(__file__).parent / "static"
    if static_root.is_dir() and any(static_root.iterdir()):
        app.mount("/", StaticFiles(directory=str(static_root), html=True),
                  name="static")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<!doctype html><html><head><title>topiclens</title></head>"
                "<body><h1>topiclens API</h1><p>No dashboard assets are "
                "installed. The JSON API lives under <code>/api</code>; "
                "start with <a href=\"/api/meta\">/api/meta</a>.</p>"
                "</body></html>")

    return app


def serve(bundle_path: str, port: int = 8000, precompute: bool = False,
          seed: int = 0, params: manifold.UmapParams | None = None,
          host: str | None = None) -> None:
    """Run the API server until interrupted."""
    import os
    import socket

    import uvicorn

    app = create_app(bundle_path, precompute=precompute, seed=seed,
                     params=params)
    if host is None:
        host = os.environ.get("TOPICLENS_HOST", "127.0.0.1")
    # Probe the port up front: uvicorn turns a failed bind into its own
    # exit code instead of raising, which would bypass our error path.
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as probe:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    uvicorn.run(app, host=host, port=port, log_level="warning")
