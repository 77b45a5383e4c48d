"""The hybrid score H_SD: an error-count-weighted blend of SD and NKER.

alpha1 = n_wk * p / (n_wnk + 1) weights the semantic term, alpha2 =
n_wnk / (n_wk * p + 1) weights the non-keyword error rate, and
H_SD = alpha1 * SD + alpha2 * NKER. The score is reported unclamped; with
several wrong keywords it can exceed 1 by design.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .align import Alignment, ErrorCounts, classify_errors
from .align import align as align_words
from .align import wer as compute_wer
from .embed import EmbeddingProvider, sd_vectors
from .errors import EmptyReferenceError
from .keywords import DEFAULT_GAMMA, KeywordPartition, WordScores, keyword_partition, nker
from .textnorm import StopwordList, default_stopwords, normalize

DEFAULT_P = 2.0


@dataclass(frozen=True)
class HybridConfig:
    """Scoring knobs. Defaults: gamma 0.4, p 2, ignore insertions."""

    gamma: float = DEFAULT_GAMMA
    p: float = DEFAULT_P
    count_insertions: bool = False
    normalized_alpha: bool = False

    def __post_init__(self) -> None:
        if self.p <= 0:
            raise ValueError(f"p must be > 0, got {self.p}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")


def alpha_weights(n_wk: int, n_wnk: int, p: float) -> tuple[float, float]:
    """Weighting coefficients from the wrong keyword / non-keyword counts."""
    alpha1 = n_wk * p / (n_wnk + 1)
    alpha2 = n_wnk / (n_wk * p + 1)
    return alpha1, alpha2


def normalize_alphas(alpha1: float, alpha2: float) -> tuple[float, float]:
    """Rescale the weights to sum to 1 (no-op when both are zero)."""
    total = alpha1 + alpha2
    if total == 0.0:
        return 0.0, 0.0
    return alpha1 / total, alpha2 / total


def hybrid_sd(sd: float, nker_value: float, alphas: tuple[float, float]) -> float:
    """H_SD = alpha1 * SD + alpha2 * NKER; unbounded above."""
    alpha1, alpha2 = alphas
    return alpha1 * sd + alpha2 * nker_value


@dataclass(frozen=True)
class ScoreBreakdown:
    """Every intermediate of one reference/hypothesis scoring."""

    wer: float
    sd: float
    nker: float
    alpha1: float
    alpha2: float
    hsd: float
    counts: ErrorCounts
    partition: KeywordPartition
    scores: WordScores
    alignment: Alignment
    ref_text: str
    hyp_text: str
    pair_id: Optional[str] = field(default=None, compare=False)

    # Stable flat field order for JSON and CSV output.
    METRIC_FIELDS = (
        "wer",
        "sd",
        "nker",
        "alpha1",
        "alpha2",
        "hsd",
        "n_wk",
        "n_wnk",
        "n_k",
        "n_nk",
        "insertions",
    )

    def as_dict(self, precision: int = 6) -> dict:
        """Flat JSON-ready mapping; floats rendered at `precision` decimals."""
        out: dict = {}
        if self.pair_id is not None:
            out["id"] = self.pair_id
        out["ref"] = self.ref_text
        out["hyp"] = self.hyp_text
        out["wer"] = round(self.wer, precision)
        out["sd"] = round(self.sd, precision)
        out["nker"] = round(self.nker, precision)
        out["alpha1"] = round(self.alpha1, precision)
        out["alpha2"] = round(self.alpha2, precision)
        out["hsd"] = round(self.hsd, precision)
        out["n_wk"] = self.counts.n_wk
        out["n_wnk"] = self.counts.n_wnk
        out["n_k"] = self.counts.n_k
        out["n_nk"] = self.counts.n_nk
        out["insertions"] = self.counts.insertions
        out["keywords"] = sorted(self.partition.keywords)
        out["non_keywords"] = sorted(self.partition.non_keywords)
        out["gamma"] = self.partition.gamma
        return out


def score_pair(
    ref: str,
    hyp: str,
    cfg: HybridConfig,
    provider: EmbeddingProvider,
    stopwords: StopwordList | None = None,
    pair_id: str | None = None,
) -> ScoreBreakdown:
    """Normalize, align, partition, and score one transcript pair.

    Raises EmptyReferenceError when the reference normalizes to zero words
    (WER and NKER are undefined there); provider failures propagate.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    ref_sentence = normalize(ref)
    hyp_sentence = normalize(hyp)
    if not ref_sentence.words:
        raise EmptyReferenceError(f"reference normalizes to zero words: {ref!r}")

    ref_vector = provider.embed(ref_sentence)
    hyp_vector = provider.embed(hyp_sentence)
    sd_value = sd_vectors(ref_vector, hyp_vector)

    partition, scores = keyword_partition(
        ref_sentence, provider, gamma=cfg.gamma, stopwords=stopwords, gt_vector=ref_vector
    )
    alignment = align_words(ref_sentence, hyp_sentence)
    counts = classify_errors(alignment, partition, count_insertions=cfg.count_insertions)
    nker_value = nker(counts)
    alphas = alpha_weights(counts.n_wk, counts.n_wnk, cfg.p)
    if cfg.normalized_alpha:
        alphas = normalize_alphas(*alphas)
    return ScoreBreakdown(
        wer=compute_wer(alignment, len(ref_sentence.words)),
        sd=sd_value,
        nker=nker_value,
        alpha1=alphas[0],
        alpha2=alphas[1],
        hsd=hybrid_sd(sd_value, nker_value, alphas),
        counts=counts,
        partition=partition,
        scores=scores,
        alignment=alignment,
        ref_text=ref_sentence.text,
        hyp_text=hyp_sentence.text,
        pair_id=pair_id,
    )
