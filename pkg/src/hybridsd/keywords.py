"""Keyword extraction from reference sentences and the non-keyword error rate.

Each candidate word (the reference minus stopwords) is scored by its
dissimilarity against the whole sentence; scores are min-max scaled and words
below the gamma threshold become keywords. Everything else in the reference,
stopwords included, is a non-keyword.
"""

from __future__ import annotations

from dataclasses import dataclass

from .align import ErrorCounts
from .embed import EmbeddingProvider, sd_vectors
from .errors import UndefinedNkerError
from .textnorm import Sentence, StopwordList, default_stopwords, filter_stopwords, word_sentence

DEFAULT_GAMMA = 0.4


@dataclass(frozen=True)
class WordScores:
    """Raw and min-max-scaled per-word dissimilarity scores, in W order."""

    raw: dict[str, float]
    scaled: dict[str, float]

    def __len__(self) -> int:
        return len(self.raw)


@dataclass(frozen=True)
class KeywordPartition:
    """Reference word types split into keywords and non-keywords."""

    keywords: frozenset[str]
    non_keywords: frozenset[str]
    gamma: float

    @property
    def all_words(self) -> frozenset[str]:
        return self.keywords | self.non_keywords


def min_max_scale(raw: dict[str, float]) -> dict[str, float]:
    """Scale scores to [0, 1]; when all scores tie (or there is only one),
    every scaled score is defined as 0."""
    if not raw:
        return {}
    lo = min(raw.values())
    hi = max(raw.values())
    if hi == lo:
        return {w: 0.0 for w in raw}
    return {w: (x - lo) / (hi - lo) for w, x in raw.items()}


def word_scores(
    gt: Sentence,
    candidates: tuple[str, ...],
    provider: EmbeddingProvider,
    gt_vector=None,
) -> WordScores:
    """Dissimilarity of each candidate word against the full sentence.

    `candidates` should come from filter_stopwords(gt). Passing a precomputed
    `gt_vector` avoids re-embedding the sentence.
    """
    if not candidates:
        return WordScores(raw={}, scaled={})
    if gt_vector is None:
        gt_vector = provider.embed(gt)
    raw = {
        word: sd_vectors(gt_vector, provider.embed(word_sentence(word)))
        for word in candidates
    }
    return WordScores(raw=raw, scaled=min_max_scale(raw))


def extract_keywords(gt: Sentence, scores: WordScores, gamma: float) -> KeywordPartition:
    """Threshold scaled scores: scaled(w) < gamma makes w a keyword.

    Under the all-tied degenerate scaling every candidate scales to 0, so the
    whole candidate set becomes keywords. Non-keywords are all remaining
    reference word types, stopwords included.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")
    keywords = frozenset(w for w, x in scores.scaled.items() if x < gamma)
    non_keywords = frozenset(w for w in gt.words if w not in keywords)
    return KeywordPartition(keywords=keywords, non_keywords=non_keywords, gamma=gamma)


def keyword_partition(
    gt: Sentence,
    provider: EmbeddingProvider,
    gamma: float = DEFAULT_GAMMA,
    stopwords: StopwordList | None = None,
    gt_vector=None,
) -> tuple[KeywordPartition, WordScores]:
    """Stopword filter, per-word scoring, and thresholding in one step."""
    if stopwords is None:
        stopwords = default_stopwords()
    candidates = filter_stopwords(gt, stopwords)
    scores = word_scores(gt, candidates, provider, gt_vector=gt_vector)
    return extract_keywords(gt, scores, gamma), scores


def nker(counts: ErrorCounts) -> float:
    """Non-keyword error rate: wrong non-keywords over reference non-keywords.

    With zero reference non-keywords the rate is 0 when nothing was wrongly
    recognized and undefined otherwise (reachable only under the
    insertion-counting policy).
    """
    if counts.n_nk == 0:
        if counts.n_wnk == 0:
            return 0.0
        raise UndefinedNkerError(
            f"{counts.n_wnk} non-keyword errors but the reference has no non-keywords"
        )
    return counts.n_wnk / counts.n_nk
