"""The on-disk interchange bundle: loading, validation, persistence.

A bundle directory holds everything the engine needs from a fitted topic
model: `manifest.json`, a vocabulary file, dense CSV matrices for the
topic-term and document-topic weights, the corpus as JSON lines, and
optional document-term counts, document embeddings and topic names.
Loading materializes an immutable in-memory bundle after cross-file
dimension checks; `validate_bundle` adds the softer semantic checks.
"""

from __future__ import annotations

import hashlib
import json
import os
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from scipy import sparse

from topiclens import tokenize

MANIFEST_NAME = "manifest.json"
DEFAULT_TOPIC_NAMES_FILE = "topic_names.json"


class BundleError(Exception):
    """Raised when a bundle directory cannot be loaded."""


@dataclass
class Document:
    id: str
    text: str
    group: str | None = None


@dataclass
class ValidationIssue:
    code: str
    message: str
    location: str = ""


@dataclass
class ValidationReport:
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, location: str = "") -> None:
        self.errors.append(ValidationIssue(code, message, location))

    def warn(self, code: str, message: str, location: str = "") -> None:
        self.warnings.append(ValidationIssue(code, message, location))


@dataclass
class CorpusBundle:
    """All model outputs for one corpus, plus where they came from."""

    documents: list[Document]
    vocabulary: list[str]
    phi: np.ndarray  # (n_topics, n_terms)
    theta: np.ndarray  # (n_docs, n_topics)
    topic_names: list[str]
    group_labels: list[str] | None = None
    doc_embeddings: np.ndarray | None = None
    doc_term: sparse.csr_matrix | None = None
    path: Path | None = None
    manifest: dict = field(default_factory=dict)

    @property
    def n_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def n_terms(self) -> int:
        return self.phi.shape[1]

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @property
    def has_groups(self) -> bool:
        return self.group_labels is not None

    def doc_index(self) -> dict[str, int]:
        return {doc.id: i for i, doc in enumerate(self.documents)}


def _read_text(path: Path, what: str) -> str:
    if not path.is_file():
        raise BundleError(f"missing {what} file: {path.name}")
    return path.read_text(encoding="utf-8")


def _parse_dense_csv(raw: str, name: str) -> np.ndarray:
    rows: list[list[float]] = []
    width = None
    for i, line in enumerate(raw.splitlines()):
        if not line.strip():
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise BundleError(
                f"{name}: row {i} has {len(cells)} columns, expected {width}")
        parsed = []
        for j, cell in enumerate(cells):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise BundleError(
                    f"malformed number in {name} at row {i}, column {j}: {cell.strip()!r}")
        rows.append(parsed)
    if not rows:
        raise BundleError(f"{name}: file is empty")
    return np.asarray(rows, dtype=np.float64)


def _format_float(x: float) -> str:
    return repr(float(x))


def load_bundle(path: str | os.PathLike) -> CorpusBundle:
    """Load and dimension-check a bundle directory.

    Raises BundleError naming the offending file and, for dimension
    mismatches, both dimensions involved.
    """
    root = Path(path)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise BundleError(f"missing manifest file: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleError(f"malformed {MANIFEST_NAME}: {exc}") from exc
    if manifest.get("version") != 1:
        raise BundleError(
            f"unsupported bundle version: {manifest.get('version')!r} (expected 1)")
    for key in ("vocabulary", "topic_term", "doc_topic", "documents"):
        if key not in manifest:
            raise BundleError(f"{MANIFEST_NAME} is missing the {key!r} entry")

    vocab_raw = _read_text(root / manifest["vocabulary"], "vocabulary")
    vocabulary = [unicodedata.normalize("NFC", line)
                  for line in vocab_raw.split("\n")]
    if vocabulary and vocabulary[-1] == "":
        vocabulary.pop()  # trailing newline

    phi = _parse_dense_csv(
        _read_text(root / manifest["topic_term"], "topic-term matrix"),
        manifest["topic_term"])
    if phi.shape[1] != len(vocabulary):
        raise BundleError(
            f"phi columns ({phi.shape[1]}) != vocabulary size ({len(vocabulary)})")
    n_topics = phi.shape[0]

    theta = _parse_dense_csv(
        _read_text(root / manifest["doc_topic"], "document-topic matrix"),
        manifest["doc_topic"])
    if theta.shape[1] != n_topics:
        raise BundleError(
            f"theta columns ({theta.shape[1]}) != phi rows ({n_topics})")

    documents = _parse_documents(
        _read_text(root / manifest["documents"], "documents"),
        manifest["documents"])
    if theta.shape[0] != len(documents):
        raise BundleError(
            f"theta rows ({theta.shape[0]}) != document count ({len(documents)})")

    with_group = sum(1 for d in documents if d.group is not None)
    if 0 < with_group < len(documents):
        raise BundleError(
            f"{manifest['documents']}: group labels present for {with_group} of "
            f"{len(documents)} documents (must be all or none)")
    group_labels = [d.group for d in documents] if with_group else None

    doc_term = None
    if "doc_term" in manifest:
        doc_term = _parse_doc_term(
            _read_text(root / manifest["doc_term"], "document-term counts"),
            manifest["doc_term"], len(documents), len(vocabulary))

    doc_embeddings = None
    if "doc_embeddings" in manifest:
        doc_embeddings = _parse_dense_csv(
            _read_text(root / manifest["doc_embeddings"], "document embeddings"),
            manifest["doc_embeddings"])
        if doc_embeddings.shape[0] != len(documents):
            raise BundleError(
                f"doc_embeddings rows ({doc_embeddings.shape[0]}) != "
                f"document count ({len(documents)})")

    names_file = root / manifest.get("topic_names", DEFAULT_TOPIC_NAMES_FILE)
    if names_file.is_file():
        try:
            topic_names = json.loads(names_file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise BundleError(f"malformed {names_file.name}: {exc}") from exc
        if (not isinstance(topic_names, list)
                or not all(isinstance(n, str) for n in topic_names)):
            raise BundleError(f"{names_file.name} must be a JSON array of strings")
        if len(topic_names) != n_topics:
            raise BundleError(
                f"topic_names entries ({len(topic_names)}) != phi rows ({n_topics})")
    else:
        topic_names = [f"Topic {k}" for k in range(n_topics)]

    phi.setflags(write=False)
    theta.setflags(write=False)
    if doc_embeddings is not None:
        doc_embeddings.setflags(write=False)

    return CorpusBundle(
        documents=documents,
        vocabulary=vocabulary,
        phi=phi,
        theta=theta,
        topic_names=topic_names,
        group_labels=group_labels,
        doc_embeddings=doc_embeddings,
        doc_term=doc_term,
        path=root,
        manifest=manifest,
    )


def _parse_documents(raw: str, name: str) -> list[Document]:
    documents = []
    for i, line in enumerate(raw.splitlines()):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise BundleError(f"{name}: malformed JSON on line {i}: {exc}") from exc
        if not isinstance(obj, dict) or "id" not in obj or "text" not in obj:
            raise BundleError(f"{name}: line {i} must be an object with 'id' and 'text'")
        group = obj.get("group")
        documents.append(Document(
            id=str(obj["id"]),
            text=tokenize.normalize_text(str(obj["text"])),
            group=None if group is None else str(group),
        ))
    return documents


def _parse_doc_term(raw: str, name: str, n_docs: int, n_terms: int) -> sparse.csr_matrix:
    rows, cols, data = [], [], []
    for i, line in enumerate(raw.splitlines()):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != 3:
            raise BundleError(f"{name}: line {i} must be 'doc_index,term_index,count'")
        try:
            d, t, c = int(cells[0]), int(cells[1]), int(cells[2])
        except ValueError:
            raise BundleError(f"malformed number in {name} at row {i}")
        if not (0 <= d < n_docs):
            raise BundleError(
                f"{name}: line {i} doc_index {d} out of range (0..{n_docs - 1})")
        if not (0 <= t < n_terms):
            raise BundleError(
                f"{name}: line {i} term_index {t} out of range (0..{n_terms - 1})")
        if c < 0:
            raise BundleError(f"{name}: line {i} has negative count {c}")
        rows.append(d)
        cols.append(t)
        data.append(c)
    return sparse.csr_matrix((data, (rows, cols)), shape=(n_docs, n_terms),
                             dtype=np.int64)


def validate_bundle(bundle: CorpusBundle) -> ValidationReport:
    """Semantic checks on a structurally loaded bundle.

    Errors make the bundle unusable by the engine; warnings flag things
    the engine tolerates (negative weights, empty documents, vocabulary
    entries the tokenizer never finds).
    """
    report = ValidationReport()
    n_topics, n_terms = bundle.phi.shape
    n_docs = len(bundle.documents)

    if bundle.theta.shape != (n_docs, n_topics):
        report.error("shape_theta",
                     f"theta shape {bundle.theta.shape} != ({n_docs}, {n_topics})",
                     "theta")
    if len(bundle.vocabulary) != n_terms:
        report.error("shape_vocabulary",
                     f"vocabulary size ({len(bundle.vocabulary)}) != phi columns ({n_terms})",
                     "vocabulary")

    seen_terms: dict[str, int] = {}
    for i, term in enumerate(bundle.vocabulary):
        if term == "":
            report.error("empty_term", f"vocabulary entry {i} is empty", "vocabulary")
            continue
        if not unicodedata.is_normalized("NFC", term):
            report.error("term_not_nfc",
                         f"vocabulary entry {i} is not NFC-normalized", "vocabulary")
        if term in seen_terms:
            report.error("duplicate_term",
                         f"vocabulary entry {i} duplicates entry {seen_terms[term]}: {term!r}",
                         "vocabulary")
        else:
            seen_terms[term] = i

    if len(bundle.topic_names) != n_topics:
        report.error("topic_names_length",
                     f"topic_names entries ({len(bundle.topic_names)}) != topics ({n_topics})",
                     "topic_names")
    for k, name in enumerate(bundle.topic_names):
        if not name:
            report.error("empty_topic_name", f"topic {k} has an empty name", "topic_names")

    seen_ids: set[str] = set()
    empty_docs = []
    for doc in bundle.documents:
        if doc.id in seen_ids:
            report.error("duplicate_doc_id", f"duplicate document id {doc.id!r}", "documents")
        seen_ids.add(doc.id)
        if not doc.text:
            empty_docs.append(doc.id)
    if empty_docs:
        report.warn("empty_documents",
                    "documents with empty text: " + ", ".join(empty_docs), "documents")

    if bundle.group_labels is not None and len(bundle.group_labels) != n_docs:
        report.error("group_labels_length",
                     f"group labels ({len(bundle.group_labels)}) != document count ({n_docs})",
                     "documents")

    if bundle.doc_embeddings is not None and bundle.doc_embeddings.shape[0] != n_docs:
        report.error("doc_embeddings_rows",
                     f"doc_embeddings rows ({bundle.doc_embeddings.shape[0]}) != "
                     f"document count ({n_docs})", "doc_embeddings")

    if bundle.doc_term is not None:
        if bundle.doc_term.shape != (n_docs, n_terms):
            report.error("doc_term_shape",
                         f"doc_term shape {bundle.doc_term.shape} != ({n_docs}, {n_terms})",
                         "doc_term")
        elif bundle.doc_term.nnz and bundle.doc_term.data.min() < 0:
            report.error("doc_term_negative", "doc_term contains negative counts", "doc_term")

    if np.any(bundle.phi < 0):
        report.warn("negative_phi", "negative phi entry; wordcloud and highlight "
                    "weights clamp at 0, rankings use raw values", "phi")
    if np.any(bundle.theta < 0):
        report.warn("negative_theta", "negative theta entry", "theta")

    if n_terms and not report.errors:
        occurring = np.asarray(
            derive_doc_term(bundle).sum(axis=0)).ravel() if n_docs else np.zeros(n_terms)
        missing = [bundle.vocabulary[i] for i in np.nonzero(occurring == 0)[0][:20]]
        n_missing = int((occurring == 0).sum())
        if n_missing:
            listed = ", ".join(repr(t) for t in missing)
            more = "" if n_missing <= 20 else f" (and {n_missing - 20} more)"
            report.warn("unused_terms",
                        f"{n_missing} vocabulary terms never occur in any document "
                        f"text: {listed}{more}", "vocabulary")

    return report


def derive_doc_term(bundle: CorpusBundle) -> sparse.csr_matrix:
    """Document-term counts under the built-in tokenizer.

    Used when the bundle ships no doc_term matrix; deterministic and
    independent of document order.
    """
    return tokenize.doc_term_counts(
        [doc.text for doc in bundle.documents], bundle.vocabulary)


def effective_doc_term(bundle: CorpusBundle) -> sparse.csr_matrix:
    """The bundle's doc_term matrix, deriving it if absent."""
    if bundle.doc_term is not None:
        return bundle.doc_term
    return derive_doc_term(bundle)


def doc_lengths(bundle: CorpusBundle) -> np.ndarray:
    """In-vocabulary token count per document."""
    return np.asarray(effective_doc_term(bundle).sum(axis=1)).ravel().astype(np.int64)


def save_topic_names(bundle: CorpusBundle, names: list[str]) -> CorpusBundle:
    """Persist manual topic names atomically; returns the renamed bundle.

    The file is written to a temp path and moved into place, so readers
    never observe a torn file.  Concurrent writers must be serialized by
    the caller (the server holds a lock around this).
    """
    if bundle.path is None:
        raise BundleError("bundle has no backing directory to save names to")
    if len(names) != bundle.n_topics:
        raise BundleError(
            f"expected {bundle.n_topics} topic names, got {len(names)}")
    if any(not n for n in names):
        raise BundleError("topic names must be non-empty")
    target = bundle.path / bundle.manifest.get("topic_names", DEFAULT_TOPIC_NAMES_FILE)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_text(json.dumps(list(names), ensure_ascii=False, indent=0),
                   encoding="utf-8")
    os.replace(tmp, target)
    return replace(bundle, topic_names=list(names))


def save_bundle(bundle: CorpusBundle, path: str | os.PathLike) -> Path:
    """Write a bundle directory (used by fixtures, packing and tests)."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "version": 1,
        "vocabulary": "vocab.txt",
        "topic_term": "phi.csv",
        "doc_topic": "theta.csv",
        "documents": "documents.jsonl",
    }
    (root / "vocab.txt").write_text(
        "".join(t + "\n" for t in bundle.vocabulary), encoding="utf-8")
    _write_dense_csv(root / "phi.csv", bundle.phi)
    _write_dense_csv(root / "theta.csv", bundle.theta)
    with open(root / "documents.jsonl", "w", encoding="utf-8") as fh:
        for doc in bundle.documents:
            obj: dict = {"id": doc.id, "text": doc.text}
            if doc.group is not None:
                obj["group"] = doc.group
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    if bundle.doc_term is not None:
        coo = bundle.doc_term.tocoo()
        order = np.lexsort((coo.col, coo.row))
        with open(root / "doc_term.csv", "w", encoding="utf-8") as fh:
            for k in order:
                fh.write(f"{coo.row[k]},{coo.col[k]},{coo.data[k]}\n")
        manifest["doc_term"] = "doc_term.csv"
    if bundle.doc_embeddings is not None:
        _write_dense_csv(root / "embeddings.csv", bundle.doc_embeddings)
        manifest["doc_embeddings"] = "embeddings.csv"
    (root / DEFAULT_TOPIC_NAMES_FILE).write_text(
        json.dumps(list(bundle.topic_names), ensure_ascii=False, indent=0),
        encoding="utf-8")
    manifest["topic_names"] = DEFAULT_TOPIC_NAMES_FILE
    (root / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return root


def _write_dense_csv(path: Path, matrix: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in np.atleast_2d(matrix):
            fh.write(",".join(_format_float(x) for x in row) + "\n")


def bundle_hash(path: str | os.PathLike) -> str:
    """SHA-256 over the bundle's data files, as a hex digest.

    Topic names are excluded: renaming is the one supported mutation and
    no derived artifact depends on the names, so renames must not
    invalidate caches.
    """
    root = Path(path)
    manifest = json.loads((root / MANIFEST_NAME).read_text(encoding="utf-8"))
    digest = hashlib.sha256()
    roles = ["vocabulary", "topic_term", "doc_topic", "documents",
             "doc_term", "doc_embeddings"]
    digest.update(json.dumps(
        {k: manifest[k] for k in roles if k in manifest},
        sort_keys=True).encode("utf-8"))
    for role in roles:
        if role not in manifest:
            continue
        file_path = root / manifest[role]
        digest.update(b"\x00" + role.encode("utf-8") + b"\x00")
        if file_path.is_file():
            digest.update(file_path.read_bytes())
    return digest.hexdigest()


def hash_files(path: str | os.PathLike) -> list[Path]:
    """The files covered by bundle_hash, for staleness snapshots."""
    root = Path(path)
    manifest = json.loads((root / MANIFEST_NAME).read_text(encoding="utf-8"))
    roles = ["vocabulary", "topic_term", "doc_topic", "documents",
             "doc_term", "doc_embeddings"]
    return [root / manifest[r] for r in roles if r in manifest]
