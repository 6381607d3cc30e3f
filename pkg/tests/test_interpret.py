import numpy as np
import pytest
from scipy import sparse

from topiclens import interpret, tokenize


# --- topic importance ---------------------------------------------------

def test_importance_identity_theta():
    s = interpret.topic_importance(np.eye(2), np.array([3, 5]))
    assert s.tolist() == [3.0, 5.0]


def test_importance_hand_value():
    theta = np.array([[0.5, 0.5], [0.2, 0.8]])
    s = interpret.topic_importance(theta, np.array([10, 10]))
    assert np.allclose(s, [7.0, 13.0])


def test_importance_zero_theta():
    s = interpret.topic_importance(np.zeros((4, 3)), np.array([1, 2, 3, 4]))
    assert s.tolist() == [0.0, 0.0, 0.0]


def test_importance_matches_bruteforce_accumulation():
    rng = np.random.default_rng(0)
    for _ in range(100):
        d = int(rng.integers(1, 51))
        n = int(rng.integers(1, 11))
        theta = rng.random((d, n))
        lengths = rng.integers(0, 40, size=d)
        expected = np.zeros(n)
        for di in range(d):
            for t in range(n):
                expected[t] += theta[di, t] * lengths[di]
        got = interpret.topic_importance(theta, lengths)
        assert np.allclose(got, expected, rtol=0, atol=1e-12)


def test_importance_linear_in_theta():
    rng = np.random.default_rng(1)
    theta = rng.random((7, 4))
    lengths = rng.integers(1, 30, size=7)
    s1 = interpret.topic_importance(theta, lengths)
    s3 = interpret.topic_importance(3.0 * theta, lengths)
    assert np.allclose(s3, 3.0 * s1, rtol=1e-15)


def test_importance_mass_conservation_for_row_stochastic_theta():
    rng = np.random.default_rng(2)
    theta = rng.random((9, 5))
    theta /= theta.sum(axis=1, keepdims=True)
    lengths = rng.integers(0, 100, size=9)
    s = interpret.topic_importance(theta, lengths)
    assert abs(s.sum() - lengths.sum()) <= 1e-9 * max(lengths.sum(), 1)


def test_importance_dimension_mismatch():
    with pytest.raises(ValueError):
        interpret.topic_importance(np.ones((2, 2)), np.ones(3))


# --- term rankings ------------------------------------------------------

def test_top_k_terms_ranking():
    phi = np.array([[0.1, 0.7, 0.2]])
    assert interpret.top_k_terms(phi, 0, 2) == [(1, 0.7), (2, 0.2)]


def test_top_k_clamps_to_vocabulary():
    phi = np.array([[0.1, 0.7, 0.2]])
    assert len(interpret.top_k_terms(phi, 0, 99)) == 3


def test_top_k_tie_breaks_by_index():
    phi = np.array([[0.5, 0.5, 0.0]])
    assert interpret.top_k_terms(phi, 0, 1) == [(0, 0.5)]


def test_top_k_topic_out_of_range():
    with pytest.raises(IndexError):
        interpret.top_k_terms(np.ones((2, 3)), 2, 1)


def test_term_prevalence_clamps_negatives():
    assert interpret.term_prevalence(np.array([[1.0, 0.0], [0.0, 2.0]])).tolist() == [1.0, 2.0]
    assert interpret.term_prevalence(np.array([[1.0, -1.0]])).tolist() == [1.0, 0.0]
    row = np.array([[0.3, 0.7, 0.1]])
    doubled = interpret.term_prevalence(np.vstack([row, row]))
    assert np.allclose(doubled, 2.0 * row.ravel())


# --- word associations --------------------------------------------------

def test_word_embedding_is_raw_column():
    phi = np.array([[1.0, 0.0], [0.0, -2.0]])
    assert interpret.word_embedding(phi, 1).tolist() == [0.0, -2.0]
    with pytest.raises(IndexError):
        interpret.word_embedding(phi, 5)


def test_nearest_words_hand_cosines():
    phi = np.array([[1.0, 2.0, 0.0],
                    [0.0, 0.0, 1.0]])
    result = interpret.nearest_words(phi, 0, 2)
    assert not result.zero_norm
    assert [i for i, _ in result.neighbors] == [1, 2]
    assert result.neighbors[0][1] == pytest.approx(1.0)
    assert result.neighbors[1][1] == pytest.approx(0.0)


def test_nearest_words_excludes_zero_norm_columns():
    phi = np.array([[1.0, 0.0, 1.0],
                    [0.0, 0.0, 0.5]])
    result = interpret.nearest_words(phi, 0, 5)
    assert [i for i, _ in result.neighbors] == [2]


def test_nearest_words_zero_norm_query_signals():
    phi = np.array([[0.0, 1.0], [0.0, 1.0]])
    result = interpret.nearest_words(phi, 0, 3)
    assert result.zero_norm
    assert result.neighbors == []


def test_nearest_words_similarities_non_increasing_and_scale_invariant():
    rng = np.random.default_rng(3)
    phi = rng.random((5, 20))
    base = interpret.nearest_words(phi, 4, 19)
    sims = [s for _, s in base.neighbors]
    assert all(a >= b - 1e-12 for a, b in zip(sims, sims[1:]))
    assert all(i != 4 for i, _ in base.neighbors)
    scaled = phi.copy()
    scaled[:, 7] *= 42.0
    again = interpret.nearest_words(scaled, 4, 19)
    assert [i for i, _ in again.neighbors] == [i for i, _ in base.neighbors]
    assert np.allclose([s for _, s in again.neighbors], sims)


def test_word_topic_distribution_hand_values():
    phi = np.array([[1.0, 0.0], [0.0, 1.0]])
    one = interpret.word_topic_distribution(phi, {0})
    assert one.values.tolist() == [1.0, 0.0] and not one.undefined
    both = interpret.word_topic_distribution(phi, {0, 1})
    assert both.values.tolist() == [0.5, 0.5]


def test_word_topic_distribution_all_nonpositive_is_uniform_flagged():
    phi = np.array([[-1.0, 0.0], [-2.0, 0.0]])
    dist = interpret.word_topic_distribution(phi, {0, 1})
    assert dist.undefined
    assert np.allclose(dist.values, [0.5, 0.5])
    with pytest.raises(ValueError):
        interpret.word_topic_distribution(phi, set())


# --- groups ---------------------------------------------------------------

def test_group_topic_matrix_hand_values():
    theta = np.array([[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]])
    g = interpret.group_topic_matrix(theta, ["g0", "g0", "g1"])
    assert g.groups == ["g0", "g1"]
    assert g.values.tolist() == [[1.0, 1.0], [0.5, 0.5]]


def test_group_topic_matrix_single_group_collapse():
    rng = np.random.default_rng(4)
    theta = rng.random((6, 3))
    g = interpret.group_topic_matrix(theta, ["all"] * 6)
    assert np.allclose(g.values[0], theta.sum(axis=0))


def test_group_topic_matrix_identity_partition():
    rng = np.random.default_rng(5)
    theta = rng.random((4, 2))
    g = interpret.group_topic_matrix(theta, ["a", "b", "c", "d"])
    assert np.allclose(g.values, theta)


def test_group_topic_matrix_matches_bruteforce():
    rng = np.random.default_rng(6)
    for _ in range(100):
        d = int(rng.integers(1, 51))
        n = int(rng.integers(1, 11))
        theta = rng.random((d, n))
        labels = [f"g{rng.integers(0, 5)}" for _ in range(d)]
        got = interpret.group_topic_matrix(theta, labels)
        expected = {}
        order = []
        for k, lab in enumerate(labels):
            if lab not in expected:
                expected[lab] = np.zeros(n)
                order.append(lab)
            expected[lab] = expected[lab] + theta[k]
        assert got.groups == order
        for gi, lab in enumerate(order):
            assert np.array_equal(got.values[gi], sum_rows(theta, labels, lab))


def sum_rows(theta, labels, lab):
    total = np.zeros(theta.shape[1])
    for k in range(theta.shape[0]):
        if labels[k] == lab:
            total += theta[k]
    return total


def test_group_additivity():
    # Dyadic entries make every partial sum exactly representable, so
    # additivity can be asserted without a tolerance.
    rng = np.random.default_rng(7)
    theta = rng.integers(0, 256, size=(10, 3)).astype(np.float64) / 64.0
    labels = ["a"] * 4 + ["b"] * 6
    split = interpret.group_topic_matrix(theta, labels)
    merged = interpret.group_topic_matrix(theta, ["ab"] * 10)
    assert np.array_equal(split.values[0] + split.values[1], merged.values[0])


def test_group_label_length_mismatch():
    with pytest.raises(ValueError):
        interpret.group_topic_matrix(np.ones((3, 2)), ["a", "b"])


def test_dominant_topic():
    assert interpret.dominant_topic([0.2, 0.5, 0.3]) == 1
    assert interpret.dominant_topic([0.5, 0.5]) == 0
    assert interpret.dominant_topic([-1.0, -2.0]) == 0


def test_dominant_topic_argmax_invariance():
    rng = np.random.default_rng(8)
    for _ in range(50):
        w = rng.normal(size=int(rng.integers(1, 9)))
        assert interpret.dominant_topic(w) == interpret.dominant_topic(np.exp(w))


def test_group_wordcloud_weights():
    doc_term = sparse.csr_matrix(np.array([[2, 1, 0], [1, 0, 1], [0, 5, 0]]))
    labels = ["g0", "g0", "g1"]
    assert interpret.group_wordcloud_weights(doc_term, labels, "g0") == \
        [(0, 3), (1, 1), (2, 1)]
    assert interpret.group_wordcloud_weights(doc_term, labels, "g1") == [(1, 5)]
    with pytest.raises(KeyError):
        interpret.group_wordcloud_weights(doc_term, labels, "nope")


def test_group_wordcloud_empty_group():
    doc_term = sparse.csr_matrix(np.zeros((2, 3)))
    assert interpret.group_wordcloud_weights(doc_term, ["a", "b"], "a") == []


# --- timeline -------------------------------------------------------------

def test_timeline_exclusive_topics():
    phi = np.array([[1.0, 0.0], [0.0, 1.0]])
    timeline = interpret.document_timeline([0, 0, 1, 1], phi, window=2, stride=2)
    assert [w.distribution.tolist() for w in timeline.windows] == \
        [[1.0, 0.0], [0.0, 1.0]]


def test_timeline_single_token_wide_window():
    phi = np.array([[3.0, 0.0], [1.0, 1.0]])
    timeline = interpret.document_timeline([0], phi, window=50, stride=25)
    assert len(timeline.windows) == 1
    # Column 0 of the clamped, column-normalized matrix is [0.75, 0.25].
    assert np.allclose(timeline.windows[0].distribution, [0.75, 0.25])


def test_timeline_oov_window_flagged_empty():
    phi = np.array([[1.0], [1.0]])
    timeline = interpret.document_timeline([-1, -1, -1], phi, window=2, stride=2)
    assert all(w.empty for w in timeline.windows)
    assert all(w.distribution.tolist() == [0.0, 0.0] for w in timeline.windows)


def test_timeline_tiles_token_sequence():
    phi = np.array([[1.0, 1.0]])
    rng = np.random.default_rng(9)
    for _ in range(25):
        n = int(rng.integers(1, 80))
        window = int(rng.integers(1, 20))
        stride = int(rng.integers(1, window + 1))
        tokens = [int(t) for t in rng.integers(-1, 2, size=n)]
        timeline = interpret.document_timeline(tokens, phi, window=window,
                                               stride=stride)
        covered = set()
        for w in timeline.windows:
            assert w.token_start % stride == 0
            covered.update(range(w.token_start, w.token_end))
        assert covered == set(range(n))


def test_timeline_windows_sum_to_one_or_are_empty():
    rng = np.random.default_rng(10)
    phi = rng.random((4, 9))
    tokens = [int(t) for t in rng.integers(-1, 9, size=200)]
    timeline = interpret.document_timeline(tokens, phi, window=16, stride=8)
    for w in timeline.windows:
        if w.empty:
            assert w.distribution.sum() == 0.0
        else:
            assert abs(w.distribution.sum() - 1.0) <= 1e-9


def test_timeline_empty_tokens():
    assert interpret.document_timeline([], np.ones((2, 2))).windows == []


# --- highlights -----------------------------------------------------------

def _match(text, vocab):
    return tokenize.VocabularyMatcher(vocab).match(text)


def test_highlights_cover_all_occurrences_of_top_term():
    phi = np.array([[3.0, 1.0], [0.0, 2.0]])
    matched = _match("alpha beta alpha", ["alpha", "beta"])
    spans = interpret.document_highlights(matched, phi, 0, max_terms=1)
    assert [(s.start, s.end) for s in spans] == [(0, 5), (11, 16)]
    assert all(s.term_index == 0 for s in spans)


def test_highlights_tie_prefers_lower_index():
    phi = np.array([[1.0, 1.0, 1.0]])
    matched = _match("beta gamma", ["alpha", "beta", "gamma"])
    spans = interpret.document_highlights(matched, phi, 0, max_terms=1)
    assert {s.term_index for s in spans} == {1}


def test_highlights_skip_zero_weight_terms():
    phi = np.array([[0.0, 1.0]])
    matched = _match("alpha beta", ["alpha", "beta"])
    spans = interpret.document_highlights(matched, phi, 0, max_terms=5)
    assert {s.term_index for s in spans} == {1}


def test_highlights_empty_document():
    phi = np.array([[1.0]])
    matched = _match("nothing matches here", ["zzz"])
    assert interpret.document_highlights(matched, phi, 0) == []


def test_highlight_spans_disjoint_in_bounds_retokenize():
    rng = np.random.default_rng(11)
    vocab = ["alpha", "beta", "gamma", "delta"]
    matcher = tokenize.VocabularyMatcher(vocab)
    for _ in range(50):
        n_topics = int(rng.integers(1, 5))
        phi = rng.random((n_topics, len(vocab)))
        words = [vocab[i] for i in rng.integers(0, len(vocab), size=30)]
        text = " ".join(words)
        matched = matcher.match(text)
        topic = int(rng.integers(0, n_topics))
        spans = interpret.document_highlights(matched, phi, topic, max_terms=3)
        data = text.encode("utf-8")
        prev_end = -1
        for s in spans:
            assert 0 <= s.start < s.end <= len(data)
            assert s.start >= prev_end
            prev_end = s.end
            sub = data[s.start:s.end].decode("utf-8")
            sub_matched = matcher.match(sub)
            assert [o.term_index for o in sub_matched.occurrences] == [s.term_index]


def test_build_topic_summaries(bundle_dir):
    from topiclens.bundle import doc_lengths, load_bundle
    loaded = load_bundle(bundle_dir)
    summaries = interpret.build_topic_summaries(
        loaded.phi, loaded.theta, doc_lengths(loaded), loaded.topic_names)
    assert len(summaries) == 3
    assert sum(s.dominant_doc_count for s in summaries) == 6
    for s in summaries:
        weights = [w for _, w in s.top_terms]
        assert weights == sorted(weights, reverse=True)
