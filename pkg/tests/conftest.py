import numpy as np
import pytest

from topiclens.bundle import CorpusBundle, Document, save_bundle

VOCAB = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"]

TEXTS = [
    "alpha beta alpha gamma delta epsilon beta zeta",
    "beta gamma beta delta alpha zeta epsilon gamma",
    "gamma delta gamma epsilon beta alpha zeta delta",
    "delta epsilon delta zeta gamma beta alpha epsilon",
    "epsilon zeta epsilon alpha delta gamma beta zeta",
    "zeta alpha zeta beta epsilon delta gamma alpha",
]


def build_bundle(path, groups=True, embeddings=False, seed=0, n_topics=3):
    """Write a small deterministic bundle to disk and return its path."""
    rng = np.random.default_rng(seed)
    phi = rng.random((n_topics, len(VOCAB)))
    theta = rng.random((len(TEXTS), n_topics))
    docs = [
        Document(id=f"d{i}", text=text,
                 group=f"g{i % 2}" if groups else None)
        for i, text in enumerate(TEXTS)
    ]
    bundle = CorpusBundle(
        documents=docs,
        vocabulary=list(VOCAB),
        phi=phi,
        theta=theta,
        topic_names=[f"Topic {k}" for k in range(n_topics)],
        group_labels=[d.group for d in docs] if groups else None,
        doc_embeddings=rng.random((len(TEXTS), 4)) if embeddings else None,
    )
    return save_bundle(bundle, path)


@pytest.fixture
def bundle_dir(tmp_path):
    return build_bundle(tmp_path / "bundle")


@pytest.fixture
def groupless_bundle_dir(tmp_path):
    return build_bundle(tmp_path / "bundle_plain", groups=False)
