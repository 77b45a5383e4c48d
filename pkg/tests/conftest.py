"""Shared fixtures: small piece vocabs, providers, and store-file helpers."""

from __future__ import annotations

import numpy as np
import pytest

from hybridsd.embed import EmbeddingStore, ReferenceEmbedder, store_save
from hybridsd.textnorm import PieceVocab, default_piece_vocab, default_stopwords


@pytest.fixture(scope="session")
def stopwords():
    return default_stopwords()


@pytest.fixture(scope="session")
def shipped_vocab():
    return default_piece_vocab()


@pytest.fixture(scope="session")
def reference_provider(shipped_vocab, stopwords):
    return ReferenceEmbedder(vocab=shipped_vocab, stopwords=stopwords)


@pytest.fixture(scope="session")
def tiny_vocab():
    """Hand-built vocab over {a..z} with a few multi-char pieces."""
    letters = set("abcdefghijklmnopqrstuvwxyz")
    return PieceVocab(
        initial=frozenset(letters | {"seat", "smok", "some"}),
        continuation=frozenset(letters | {"belt", "e", "ing", "thing"}),
    )


def make_store(path, entries: dict[str, list[float]]) -> EmbeddingStore:
    """Write and reload a store file holding the given text -> vector map."""
    dims = {len(v) for v in entries.values()}
    assert len(dims) == 1
    store = EmbeddingStore(
        entries={k: np.asarray(v, dtype=np.float64) for k, v in entries.items()},
        dim=dims.pop(),
    )
    store_save(store, path)
    from hybridsd.embed import store_load

    return store_load(path)


@pytest.fixture
def flight_store(tmp_path):
    """Fixture store for the flight sentence.

    The two candidate words score identically against the sentence, which
    forces the degenerate tie convention and the keyword set {flight, land}.
    The keyword-corrupted hypothesis is placed at cosine 0.145, i.e. a
    dissimilarity of exactly 0.855.
    """
    h1_y = float(np.sqrt(1.0 - 0.145**2))
    return make_store(
        tmp_path / "flight_store.txt",
        {
            "the flight is about to land": [1.0, 0.0, 0.0],
            "flight": [0.0, 1.0, 0.0],
            "land": [0.0, 0.0, 1.0],
            "te flight s about to land": [0.6, 0.8, 0.0],
            "the fite is about to lamt": [0.145, h1_y, 0.0],
        },
    )
