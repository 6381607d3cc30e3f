"""Tokenization and vocabulary matching.

The engine never re-runs a topic model's own vectorizer, so it needs a
reproducible, model-independent way to locate vocabulary terms in raw
text.  The rules: text is NFC-normalized, tokens are maximal runs of
Unicode letters/digits, matching is exact on lowercased tokens, and
multiword vocabulary entries match as contiguous token sequences,
longest match first, with each token consumed at most once.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

# Maximal runs of Unicode letters/digits (word chars minus underscore).
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def normalize_text(text: str) -> str:
    """NFC-normalize, leaving already-normalized text untouched."""
    if unicodedata.is_normalized("NFC", text):
        return text
    return unicodedata.normalize("NFC", text)


def token_spans(text: str) -> list[tuple[int, int]]:
    """Character (start, end) spans of tokens in NFC text."""
    return [m.span() for m in _TOKEN_RE.finditer(text)]


def term_key(term: str) -> tuple[str, ...]:
    """Lowercased token tuple a vocabulary entry matches as."""
    norm = normalize_text(term)
    return tuple(norm[s:e].lower() for s, e in token_spans(norm))


@dataclass(frozen=True)
class TermOccurrence:
    """One matched vocabulary term, located in the document text."""

    term_index: int
    start: int  # char offset into the NFC text
    end: int
    byte_start: int  # offset into the UTF-8 encoding of the NFC text
    byte_end: int


@dataclass
class MatchedDocument:
    """Tokenizer output for one document."""

    text: str  # NFC form the offsets refer to
    occurrences: list[TermOccurrence]
    token_ids: list[int]  # one entry per consumed unit, -1 for out-of-vocabulary
    n_tokens: int  # raw token count before vocabulary matching
    raw_spans: list[tuple[int, int]] = field(default_factory=list)

    def counts(self, n_terms: int) -> np.ndarray:
        out = np.zeros(n_terms, dtype=np.int64)
        for occ in self.occurrences:
            out[occ.term_index] += 1
        return out


class VocabularyMatcher:
    """Maps token runs in text to vocabulary indices.

    When two vocabulary entries normalize to the same token sequence the
    lower index wins, so matching stays deterministic.
    """

    def __init__(self, vocabulary: list[str]):
        self.vocabulary = list(vocabulary)
        self._lookup: dict[tuple[str, ...], int] = {}
        self._max_len = 1
        for idx, term in enumerate(self.vocabulary):
            key = term_key(term)
            if not key:
                continue
            if key not in self._lookup:
                self._lookup[key] = idx
            if len(key) > self._max_len:
                self._max_len = len(key)

    def match(self, text: str) -> MatchedDocument:
        """Locate vocabulary terms in ``text``.

        Matching consumes tokens left to right; at each position the
        longest vocabulary entry starting there wins.  A multiword match
        contributes a single entry to ``token_ids`` and a single
        occurrence spanning from its first to its last token.
        """
        norm = normalize_text(text)
        spans = token_spans(norm)
        tokens = [norm[s:e].lower() for s, e in spans]
        n = len(tokens)

        if norm.isascii():
            byte_at = None
        else:
            # cumulative UTF-8 byte offset per char position
            byte_at = [0] * (len(norm) + 1)
            total = 0
            for i, ch in enumerate(norm):
                total += len(ch.encode("utf-8"))
                byte_at[i + 1] = total

        def to_bytes(pos: int) -> int:
            return pos if byte_at is None else byte_at[pos]

        occurrences: list[TermOccurrence] = []
        token_ids: list[int] = []
        i = 0
        while i < n:
            matched = False
            max_len = min(self._max_len, n - i)
            for length in range(max_len, 0, -1):
                idx = self._lookup.get(tuple(tokens[i:i + length]))
                if idx is not None:
                    start = spans[i][0]
                    end = spans[i + length - 1][1]
                    occurrences.append(TermOccurrence(
                        term_index=idx,
                        start=start,
                        end=end,
                        byte_start=to_bytes(start),
                        byte_end=to_bytes(end),
                    ))
                    token_ids.append(idx)
                    i += length
                    matched = True
                    break
            if not matched:
                token_ids.append(-1)
                i += 1

        return MatchedDocument(
            text=norm,
            occurrences=occurrences,
            token_ids=token_ids,
            n_tokens=n,
            raw_spans=spans,
        )


def doc_term_counts(texts: list[str], vocabulary: list[str]) -> sparse.csr_matrix:
    """Sparse document-term count matrix under the built-in tokenizer."""
    matcher = VocabularyMatcher(vocabulary)
    rows: list[int] = []
    cols: list[int] = []
    data: list[int] = []
    for d, text in enumerate(texts):
        seen: dict[int, int] = {}
        for occ in matcher.match(text).occurrences:
            seen[occ.term_index] = seen.get(occ.term_index, 0) + 1
        for term, count in sorted(seen.items()):
            rows.append(d)
            cols.append(term)
            data.append(count)
    return sparse.csr_matrix(
        (data, (rows, cols)),
        shape=(len(texts), len(vocabulary)),
        dtype=np.int64,
    )


def snippet_cut(matched: MatchedDocument, max_chars: int) -> int:
    """Largest cut position <= max_chars that does not split a token."""
    if max_chars >= len(matched.text):
        return len(matched.text)
    if max_chars < 0:
        return 0
    cut = max_chars
    for s, e in matched.raw_spans:
        if s < cut < e:
            return s
        if s >= cut:
            break
    return cut
