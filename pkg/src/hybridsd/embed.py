"""Sentence embedding providers plus cosine similarity and dissimilarity (SD).

Three interchangeable providers exist: a deterministic hash-based reference
embedder (no model download, fully offline), an exact-match file store for
fixture or exported vectors, and a client for a remote embedding service.
Every provider is deterministic and read-only after construction, so
concurrent embedding calls need no coordination.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np
import requests

from .errors import (
    DimensionMismatchError,
    ParseError,
    RemoteShapeError,
    RemoteStatusError,
    RemoteTransportError,
    StoreMissError,
    ZeroVectorError,
)
from .textnorm import (
    PieceVocab,
    Sentence,
    StopwordList,
    default_piece_vocab,
    default_stopwords,
    normalize,
    wordpiece_tokenize,
)

DEFAULT_DIM = 128
DEFAULT_SEED = 12345
DEFAULT_STOPWORD_WEIGHT = 0.2


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] against rounding drift."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"vector dims differ: {a.shape} vs {b.shape}")
    norm_a = float(np.linalg.norm(a))
    norm_b = float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVectorError("cosine similarity is undefined for a zero vector")
    if np.array_equal(a, b):
        # Identical embeddings must give exactly 1 (and SD exactly 0).
        return 1.0
    value = float(np.dot(a, b) / (norm_a * norm_b))
    return max(-1.0, min(1.0, value))


def sd_vectors(a: np.ndarray, b: np.ndarray) -> float:
    """Sentence dissimilarity between two embeddings: 1 - cosine, in [0, 1]."""
    return max(0.0, min(1.0, 1.0 - cosine(a, b)))


class EmbeddingProvider:
    """Deterministic source of fixed-dimension sentence vectors."""

    kind: str = "abstract"
    dim: int

    def embed(self, sentence: Sentence) -> np.ndarray:
        raise NotImplementedError

    def embed_batch(self, sentences: list[Sentence]) -> list[np.ndarray]:
        return [self.embed(s) for s in sentences]


def sd(s1: Sentence, s2: Sentence, provider: EmbeddingProvider) -> float:
    """Sentence dissimilarity under a provider; 0 means semantically identical."""
    return sd_vectors(provider.embed(s1), provider.embed(s2))


# ---------------------------------------------------------------------------
# Reference embedder
# ---------------------------------------------------------------------------


class ReferenceEmbedder(EmbeddingProvider):
    """Model-free embedder: seeded hash vectors over wordpiece decompositions.

    Each piece maps to a fixed pseudo-random unit vector derived from a keyed
    hash of the piece string. A sentence embeds as the normalized weighted sum
    of its words' piece vectors, with stopword words down-weighted so that
    content-word errors move the vector more, mirroring how a trained sentence
    encoder weighs meaning-bearing words. Identical inputs give identical
    vectors across runs and platforms.
    """

    kind = "reference"

    def __init__(
        self,
        vocab: PieceVocab | None = None,
        stopwords: StopwordList | None = None,
        seed: int = DEFAULT_SEED,
        dim: int = DEFAULT_DIM,
        stopword_weight: float = DEFAULT_STOPWORD_WEIGHT,
    ):
        self.vocab = vocab if vocab is not None else default_piece_vocab()
        self.stopwords = stopwords if stopwords is not None else default_stopwords()
        self.seed = seed
        self.dim = dim
        self.stopword_weight = stopword_weight
        self._piece_cache: dict[str, np.ndarray] = {}
        self._word_cache: dict[str, np.ndarray] = {}
        self._empty = self._piece_vector("")

    def _piece_vector(self, piece: str) -> np.ndarray:
        vec = self._piece_cache.get(piece)
        if vec is None:
            digest = hashlib.blake2b(
                piece.encode("utf-8"),
                key=self.seed.to_bytes(8, "little", signed=True),
                digest_size=16,
            ).digest()
            rng = np.random.Generator(np.random.PCG64(int.from_bytes(digest, "little")))
            vec = rng.standard_normal(self.dim)
            vec /= np.linalg.norm(vec)
            vec.setflags(write=False)
            self._piece_cache[piece] = vec
        return vec

    def _word_vector(self, word: str) -> np.ndarray:
        vec = self._word_cache.get(word)
        if vec is None:
            pieces = wordpiece_tokenize(word, self.vocab)
            vec = np.sum([self._piece_vector(p) for p in pieces], axis=0)
            vec.setflags(write=False)
            self._word_cache[word] = vec
        return vec

    def embed(self, sentence: Sentence) -> np.ndarray:
        if not sentence.words:
            return self._empty
        acc = np.zeros(self.dim)
        for word in sentence.words:
            weight = self.stopword_weight if word in self.stopwords else 1.0
            acc += weight * self._word_vector(word)
        norm = np.linalg.norm(acc)
        if norm < 1e-12:
            # Exact cancellation is all but impossible with hash vectors;
            # fall back to the designated empty-sentence direction.
            return self._empty
        return acc / norm


# ---------------------------------------------------------------------------
# Embedding store (exact-match file fixtures)
# ---------------------------------------------------------------------------


class EmbeddingStore(EmbeddingProvider):
    """Exact-match map from normalized sentence text to a fixed vector."""

    kind = "store"

    def __init__(self, entries: dict[str, np.ndarray], dim: int):
        self.entries = entries
        self.dim = dim

    def embed(self, sentence: Sentence) -> np.ndarray:
        vec = self.entries.get(sentence.text)
        if vec is None:
            raise StoreMissError(sentence.text)
        return vec

    def __len__(self) -> int:
        return len(self.entries)


def store_load(path: str | Path) -> EmbeddingStore:
    """Load a store file: `dim N` header, then `text<TAB>f1 f2 ... fN` lines.

    Keys are normalized on load, so lookups succeed for any raw spelling that
    normalizes to the same text.
    """
    entries: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2 or parts[0] != "dim":
            raise ParseError("expected header line `dim N`", str(path), 1)
        try:
            dim = int(parts[1])
        except ValueError:
            raise ParseError(f"bad dimension {parts[1]!r}", str(path), 1) from None
        if dim < 1:
            raise ParseError(f"dimension must be >= 1, got {dim}", str(path), 1)
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            text, sep, numbers = line.rstrip("\n").partition("\t")
            if not sep:
                raise ParseError("missing tab between text and vector", str(path), lineno)
            try:
                values = np.array([float(x) for x in numbers.split()], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"bad float: {exc}", str(path), lineno) from None
            if values.size != dim:
                raise ParseError(
                    f"expected {dim} values, got {values.size}", str(path), lineno
                )
            if not np.all(np.isfinite(values)):
                raise ParseError("vector contains non-finite values", str(path), lineno)
            values.setflags(write=False)
            entries[normalize(text).text] = values
    return EmbeddingStore(entries=entries, dim=dim)


def store_save(store: EmbeddingStore, path: str | Path) -> None:
    """Write a store in the `dim N` + tab-separated text format, full precision."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dim {store.dim}\n")
        for text in sorted(store.entries):
            numbers = " ".join(repr(float(x)) for x in store.entries[text])
            fh.write(f"{text}\t{numbers}\n")


def store_embed(sentence: Sentence, store: EmbeddingStore) -> np.ndarray:
    return store.embed(sentence)


# ---------------------------------------------------------------------------
# Remote embedding service client
# ---------------------------------------------------------------------------


class RemoteEmbedder(EmbeddingProvider):
    """Client for a POST endpoint: `{"texts": [...]}` -> `{"embeddings": [[...]]}`."""

    kind = "remote"

    def __init__(self, endpoint: str, timeout: float = 10.0, dim: int | None = None):
        self.endpoint = endpoint
        self.timeout = timeout
        self.dim = dim  # pinned after the first successful call if not given

    def embed(self, sentence: Sentence) -> np.ndarray:
        return self.embed_texts([sentence.text])[0]

    def embed_batch(self, sentences: list[Sentence]) -> list[np.ndarray]:
        if not sentences:
            return []
        return self.embed_texts([s.text for s in sentences])

    def embed_texts(self, texts: list[str]) -> list[np.ndarray]:
        """One vector per input text, order-preserving, uniform dimension."""
        if not texts:
            return []
        try:
            response = requests.post(
                self.endpoint, json={"texts": texts}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise RemoteTransportError(
                f"could not reach embedding service at {self.endpoint}: {exc}"
            ) from exc
        if response.status_code != 200:
            raise RemoteStatusError(response.status_code, response.text[:200])
        try:
            payload = response.json()
        except (json.JSONDecodeError, ValueError) as exc:
            raise RemoteShapeError(f"response is not valid JSON: {exc}") from exc
        embeddings = payload.get("embeddings") if isinstance(payload, dict) else None
        if not isinstance(embeddings, list):
            raise RemoteShapeError("response lacks an `embeddings` list")
        if len(embeddings) != len(texts):
            raise RemoteShapeError(
                f"sent {len(texts)} texts but received {len(embeddings)} vectors"
            )
        vectors: list[np.ndarray] = []
        for row in embeddings:
            vec = np.asarray(row, dtype=np.float64)
            if vec.ndim != 1 or vec.size == 0 or not np.all(np.isfinite(vec)):
                raise RemoteShapeError("embedding rows must be nonempty finite 1-d arrays")
            if self.dim is None:
                self.dim = int(vec.size)
            elif vec.size != self.dim:
                raise RemoteShapeError(
                    f"expected dim {self.dim}, got a vector of dim {vec.size}"
                )
            vec.setflags(write=False)
            vectors.append(vec)
        return vectors


def remote_embed(texts: list[str], endpoint: str, timeout: float = 10.0) -> list[np.ndarray]:
    """One-shot helper around RemoteEmbedder.embed_texts."""
    return RemoteEmbedder(endpoint, timeout=timeout).embed_texts(texts)
