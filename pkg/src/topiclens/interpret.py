"""Interpretation formulas over the bundle matrices.

Everything here is a pure function of phi, Theta, the document-term
counts and the group labels.  Ranking functions break ties by ascending
index so every output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse


@dataclass
class TopicSummary:
    topic_id: int
    name: str
    importance: float
    top_terms: list[tuple[int, float]]  # (term index, weight), rank order
    dominant_doc_count: int


@dataclass
class GroupTopicMatrix:
    groups: list[str]  # first-appearance order
    values: np.ndarray  # (n_groups, n_topics)

    def row(self, group: str) -> np.ndarray:
        return self.values[self.groups.index(group)]


@dataclass
class WordNeighbors:
    term_index: int
    neighbors: list[tuple[int, float]]  # (term index, cosine similarity)
    zero_norm: bool  # query column had zero norm; neighbors is then empty


@dataclass
class TopicDistribution:
    values: np.ndarray  # length n_topics, sums to 1 unless undefined
    undefined: bool  # no positive mass anywhere; values are uniform


@dataclass(frozen=True)
class HighlightSpan:
    start: int  # byte offset into the UTF-8 text
    end: int
    term_index: int
    weight: float


@dataclass
class TimelineWindow:
    token_start: int
    token_end: int
    distribution: np.ndarray  # length n_topics
    empty: bool  # no in-vocabulary token in the window


@dataclass
class Timeline:
    windows: list[TimelineWindow] = field(default_factory=list)


def topic_importance(theta: np.ndarray, doc_lengths: np.ndarray) -> np.ndarray:
    """Corpus-level weight per topic: s_t = sum_d Theta[d,t] * len(d)."""
    theta = np.asarray(theta, dtype=np.float64)
    lengths = np.asarray(doc_lengths, dtype=np.float64)
    if theta.shape[0] != lengths.shape[0]:
        raise ValueError(
            f"theta rows ({theta.shape[0]}) != doc_lengths ({lengths.shape[0]})")
    return lengths @ theta


def _ranked_desc(weights: np.ndarray) -> np.ndarray:
    # Stable sort on negated weights: ties fall back to ascending index.
    return np.argsort(-weights, kind="stable")


def top_k_terms(phi: np.ndarray, topic: int, k: int) -> list[tuple[int, float]]:
    """Top-k terms of one topic, weight-descending, ties by ascending index."""
    if not 0 <= topic < phi.shape[0]:
        raise IndexError(f"topic {topic} out of range (0..{phi.shape[0] - 1})")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    row = np.asarray(phi[topic], dtype=np.float64)
    order = _ranked_desc(row)[: min(k, row.shape[0])]
    return [(int(i), float(row[i])) for i in order]


def term_prevalence(phi: np.ndarray) -> np.ndarray:
    """Per-term global weight: column sums of phi with negatives clamped."""
    return np.clip(np.asarray(phi, dtype=np.float64), 0.0, None).sum(axis=0)


def word_embedding(phi: np.ndarray, term: int) -> np.ndarray:
    """The raw phi column of one term; sign is preserved."""
    if not 0 <= term < phi.shape[1]:
        raise IndexError(f"term {term} out of range (0..{phi.shape[1] - 1})")
    return np.asarray(phi, dtype=np.float64)[:, term].copy()


def nearest_words(phi: np.ndarray, term: int, n: int) -> WordNeighbors:
    """Most similar terms by cosine similarity between phi columns.

    The query itself and zero-norm columns are excluded.  A zero-norm
    query yields an empty list with the zero_norm flag set, so callers
    can tell "no associations exist" apart from "none were found".
    """
    phi = np.asarray(phi, dtype=np.float64)
    if not 0 <= term < phi.shape[1]:
        raise IndexError(f"term {term} out of range (0..{phi.shape[1] - 1})")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    norms = np.sqrt((phi * phi).sum(axis=0))
    if norms[term] == 0.0:
        return WordNeighbors(term_index=term, neighbors=[], zero_norm=True)
    sims = (phi.T @ phi[:, term]) / np.where(norms == 0.0, 1.0, norms) / norms[term]
    valid = np.flatnonzero(norms > 0.0)
    valid = valid[valid != term]
    order = valid[_ranked_desc(sims[valid])][:n]
    return WordNeighbors(
        term_index=term,
        neighbors=[(int(i), float(sims[i])) for i in order],
        zero_norm=False,
    )


def word_topic_distribution(phi: np.ndarray, terms) -> TopicDistribution:
    """Normalized clamped topic mass over a set of terms."""
    idx = sorted(set(int(t) for t in terms))
    if not idx:
        raise ValueError("terms must be non-empty")
    phi = np.asarray(phi, dtype=np.float64)
    for t in idx:
        if not 0 <= t < phi.shape[1]:
            raise IndexError(f"term {t} out of range (0..{phi.shape[1] - 1})")
    mass = np.clip(phi[:, idx], 0.0, None).sum(axis=1)
    total = mass.sum()
    if total <= 0.0:
        n = phi.shape[0]
        return TopicDistribution(values=np.full(n, 1.0 / n), undefined=True)
    return TopicDistribution(values=mass / total, undefined=False)


def group_topic_matrix(theta: np.ndarray, labels: list[str]) -> GroupTopicMatrix:
    """G[i,j] = sum of Theta[k,j] over documents k in group i.

    Groups are ordered by first appearance in the corpus.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape[0] != len(labels):
        raise ValueError(
            f"theta rows ({theta.shape[0]}) != labels ({len(labels)})")
    groups: list[str] = []
    index: dict[str, int] = {}
    for lab in labels:
        if lab not in index:
            index[lab] = len(groups)
            groups.append(lab)
    values = np.zeros((len(groups), theta.shape[1]), dtype=np.float64)
    for k, lab in enumerate(labels):
        values[index[lab]] += theta[k]
    return GroupTopicMatrix(groups=groups, values=values)


def dominant_topic(weights: np.ndarray) -> int:
    """Argmax over raw weights, lowest index on ties."""
    weights = np.asarray(weights, dtype=np.float64)
    if weights.shape[0] < 1:
        raise ValueError("weights must have at least one entry")
    return int(np.argmax(weights))


def group_wordcloud_weights(doc_term: sparse.spmatrix, labels: list[str],
                            group: str, top: int = 100) -> list[tuple[int, int]]:
    """Summed term counts over one group's documents, top entries only."""
    if group not in labels:
        raise KeyError(f"unknown group: {group!r}")
    rows = [i for i, lab in enumerate(labels) if lab == group]
    counts = np.asarray(doc_term.tocsr()[rows].sum(axis=0)).ravel()
    order = _ranked_desc(counts)
    out = []
    for i in order[:top]:
        if counts[i] <= 0:
            break
        out.append((int(i), int(counts[i])))
    return out


def clamped_column_normalized(phi: np.ndarray) -> np.ndarray:
    """phi with negatives clamped and each column scaled to sum 1.

    All-zero columns stay zero.  This is the weighting used by timelines
    and highlights so topics with globally larger scales do not dominate.
    """
    phat = np.clip(np.asarray(phi, dtype=np.float64), 0.0, None)
    sums = phat.sum(axis=0)
    nonzero = sums > 0.0
    phat[:, nonzero] /= sums[nonzero]
    return phat


def document_timeline(tokens, phi: np.ndarray, window: int = 50,
                      stride: int = 25,
                      phi_hat: np.ndarray | None = None) -> Timeline:
    """Per-window topic distributions along a document's token sequence.

    tokens is the document's vocabulary-index sequence; -1 marks an
    out-of-vocabulary token, which contributes position but no mass.
    Windows start at every multiple of stride; the last one may be
    partial.  Full coverage of the sequence requires stride <= window.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    tokens = [int(t) for t in tokens]
    if not tokens:
        return Timeline(windows=[])
    if phi_hat is None:
        phi_hat = clamped_column_normalized(phi)
    n_topics = phi_hat.shape[0]
    windows = []
    for start in range(0, len(tokens), stride):
        end = min(start + window, len(tokens))
        scores = np.zeros(n_topics, dtype=np.float64)
        for t in tokens[start:end]:
            if t >= 0:
                scores += phi_hat[:, t]
        total = scores.sum()
        if total > 0.0:
            windows.append(TimelineWindow(start, end, scores / total, False))
        else:
            windows.append(TimelineWindow(start, end, scores, True))
        if end == len(tokens):
            break
    return Timeline(windows=windows)


def document_highlights(matched, phi: np.ndarray, topic: int,
                        max_terms: int = 10,
                        phi_hat: np.ndarray | None = None) -> list[HighlightSpan]:
    """Byte spans of the document's most topic-relevant terms.

    matched is a tokenize.MatchedDocument.  Terms are ranked by
    phi_hat[topic, term] * count; the top max_terms strictly positive
    terms contribute every occurrence as a span.  Spans come back
    non-overlapping and ascending by start.
    """
    if phi_hat is None:
        phi_hat = clamped_column_normalized(phi)
    if not 0 <= topic < phi_hat.shape[0]:
        raise IndexError(f"topic {topic} out of range (0..{phi_hat.shape[0] - 1})")
    if max_terms < 1:
        raise ValueError(f"max_terms must be >= 1, got {max_terms}")
    counts: dict[int, int] = {}
    for occ in matched.occurrences:
        counts[occ.term_index] = counts.get(occ.term_index, 0) + 1
    scored = [(t, phi_hat[topic, t] * c) for t, c in counts.items()]
    scored = [(t, s) for t, s in scored if s > 0.0]
    scored.sort(key=lambda ts: (-ts[1], ts[0]))
    chosen = {t for t, _ in scored[:max_terms]}
    weights = dict(scored[:max_terms])
    spans = [
        HighlightSpan(occ.byte_start, occ.byte_end, occ.term_index,
                      float(weights[occ.term_index]))
        for occ in matched.occurrences
        if occ.term_index in chosen
    ]
    spans.sort(key=lambda s: s.start)
    return spans


def build_topic_summaries(phi: np.ndarray, theta: np.ndarray,
                          doc_lengths: np.ndarray, names: list[str],
                          k: int = 10) -> list[TopicSummary]:
    """One TopicSummary per topic, with importances and top-k terms."""
    importances = topic_importance(theta, doc_lengths)
    theta = np.asarray(theta, dtype=np.float64)
    dominant = np.zeros(phi.shape[0], dtype=np.int64)
    if theta.shape[0]:
        winners = np.argmax(theta, axis=1)
        for w in winners:
            dominant[w] += 1
    return [
        TopicSummary(
            topic_id=t,
            name=names[t],
            importance=float(importances[t]),
            top_terms=top_k_terms(phi, t, k) if phi.shape[1] else [],
            dominant_doc_count=int(dominant[t]),
        )
        for t in range(phi.shape[0])
    ]
