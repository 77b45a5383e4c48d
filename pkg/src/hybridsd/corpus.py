"""Corpus ingestion, corruption-set generation, batch scoring, and statistics.

Corpora are jsonl ({"id", "ref", "hyp"}), csv, or tsv files with a header row
`id,ref,hyp`. Error induction removes the vowels from seeded-selected keyword
or non-keyword tokens, producing hypothesis sets with identical WER but very
different hybrid scores.
"""

from __future__ import annotations

import csv
import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .embed import EmbeddingProvider
from .errors import (
    DuplicateIdError,
    HybridSdError,
    InputError,
    ParseError,
    UndefinedCorrelationError,
)
from .hybrid import HybridConfig, ScoreBreakdown, score_pair
from .keywords import keyword_partition
from .textnorm import StopwordList, default_stopwords, normalize

VOWELS = frozenset("aeiou")
DEFAULT_SEED = 12345
FORMATS = ("jsonl", "csv", "tsv")


@dataclass(frozen=True)
class TranscriptPair:
    """One reference/hypothesis utterance pair; hyp may be absent for
    induction inputs."""

    id: str
    ref: str
    hyp: Optional[str] = None


def detect_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in FORMATS:
        return suffix
    raise InputError(
        f"cannot infer corpus format from {path!r}; expected one of {FORMATS}"
    )


def load_pairs(path: str | Path, fmt: str | None = None) -> list[TranscriptPair]:
    """Order-preserving corpus parse with per-line error reporting."""
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise InputError(f"unknown corpus format {fmt!r}; expected one of {FORMATS}")
    pairs: list[TranscriptPair] = []
    seen: set[str] = set()

    def add(pair_id, ref, hyp, lineno: int) -> None:
        if pair_id is None or str(pair_id) == "":
            raise ParseError("record is missing `id`", str(path), lineno)
        if ref is None or str(ref) == "":
            raise ParseError("record is missing `ref`", str(path), lineno)
        pair_id = str(pair_id)
        if pair_id in seen:
            raise DuplicateIdError(pair_id, lineno)
        seen.add(pair_id)
        hyp = None if hyp is None else str(hyp)
        pairs.append(TranscriptPair(id=pair_id, ref=str(ref), hyp=hyp))

    with open(path, encoding="utf-8", newline="") as fh:
        if fmt == "jsonl":
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"invalid JSON: {exc.msg}", str(path), lineno) from None
                if not isinstance(record, dict):
                    raise ParseError("record is not a JSON object", str(path), lineno)
                add(record.get("id"), record.get("ref"), record.get("hyp"), lineno)
        else:
            delimiter = "," if fmt == "csv" else "\t"
            reader = csv.DictReader(fh, delimiter=delimiter)
            if reader.fieldnames is None or not {"id", "ref"} <= set(reader.fieldnames):
                raise ParseError(
                    "expected a header row containing id,ref[,hyp]", str(path), 1
                )
            for record in reader:
                lineno = reader.line_num
                extra = record.get(None)
                if extra:
                    raise ParseError("row has too many fields", str(path), lineno)
                add(record.get("id"), record.get("ref"), record.get("hyp"), lineno)
    return pairs


def save_pairs(pairs: list[TranscriptPair], path: str | Path, fmt: str | None = None) -> None:
    """Write a corpus back out; round-trips with load_pairs in all formats."""
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise InputError(f"unknown corpus format {fmt!r}; expected one of {FORMATS}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if fmt == "jsonl":
            for pair in pairs:
                record = {"id": pair.id, "ref": pair.ref}
                if pair.hyp is not None:
                    record["hyp"] = pair.hyp
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        else:
            delimiter = "," if fmt == "csv" else "\t"
            writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
            writer.writerow(["id", "ref", "hyp"])
            for pair in pairs:
                writer.writerow([pair.id, pair.ref, "" if pair.hyp is None else pair.hyp])


# ---------------------------------------------------------------------------
# Error induction (vowel removal)
# ---------------------------------------------------------------------------

TARGET_KEYWORDS = "keywords"
TARGET_NONKEYWORDS = "nonkeywords"


def strip_vowels(word: str) -> str:
    return "".join(ch for ch in word if ch not in VOWELS)


def _eligible(word: str) -> bool:
    """Corruptible words: long enough, have a vowel to drop, keep a char after."""
    return len(word) >= 2 and any(ch in VOWELS for ch in word) and strip_vowels(word) != ""


def _selection_rng(seed: int, text: str) -> random.Random:
    digest = hashlib.blake2b(
        text.encode("utf-8"), key=seed.to_bytes(8, "little", signed=True), digest_size=8
    ).digest()
    return random.Random(int.from_bytes(digest, "little"))


def eligible_positions(words: tuple[str, ...], target_types: frozenset[str]) -> list[int]:
    return [i for i, w in enumerate(words) if w in target_types and _eligible(w)]


def induce_errors(
    ref: str,
    target: str,
    n_words: int,
    cfg: HybridConfig,
    provider: EmbeddingProvider,
    stopwords: StopwordList | None = None,
    seed: int = DEFAULT_SEED,
) -> str:
    """Corrupt `n_words` seeded-selected tokens of the targeted partition by
    deleting their vowels; every other token is unchanged, so the resulting
    pair has WER = n_words / len(ref).

    The selection rng is derived from the seed and the reference text, so one
    seed gives an independent but reproducible choice per sentence.
    """
    if target not in (TARGET_KEYWORDS, TARGET_NONKEYWORDS):
        raise InputError(f"unknown induction target {target!r}")
    if n_words < 0:
        raise InputError(f"n_words must be >= 0, got {n_words}")
    sentence = normalize(ref)
    if not sentence.words:
        raise InputError(f"reference normalizes to zero words: {ref!r}")
    if n_words == 0:
        return sentence.text
    if stopwords is None:
        stopwords = default_stopwords()
    partition, _ = keyword_partition(sentence, provider, gamma=cfg.gamma, stopwords=stopwords)
    targets = partition.keywords if target == TARGET_KEYWORDS else partition.non_keywords
    positions = eligible_positions(sentence.words, targets)
    if len(positions) < n_words:
        raise InputError(
            f"asked to corrupt {n_words} {target} but only {len(positions)} "
            f"eligible tokens exist in {sentence.text!r}"
        )
    rng = _selection_rng(seed, sentence.text)
    chosen = set(rng.sample(positions, n_words))
    corrupted = [
        strip_vowels(w) if i in chosen else w for i, w in enumerate(sentence.words)
    ]
    return " ".join(corrupted)


@dataclass(frozen=True)
class GeneratedSets:
    """Keyword-corrupted (A) and non-keyword-corrupted (B) hypothesis sets."""

    set_a: list[TranscriptPair]
    set_b: list[TranscriptPair]
    excluded: list[tuple[str, str]]  # (pair id, reason)


def generate_sets(
    pairs: list[TranscriptPair],
    cfg: HybridConfig,
    provider: EmbeddingProvider,
    n_words: int = 1,
    stopwords: StopwordList | None = None,
    seed: int = DEFAULT_SEED,
) -> GeneratedSets:
    """Per reference, one keyword-corrupted and one non-keyword-corrupted
    hypothesis with the same corruption count, so per-sentence WER matches
    across the two sets exactly. References that cannot support `n_words`
    corruptions on both sides are excluded from both sets and listed.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    set_a: list[TranscriptPair] = []
    set_b: list[TranscriptPair] = []
    excluded: list[tuple[str, str]] = []
    for pair in pairs:
        sentence = normalize(pair.ref)
        if not sentence.words:
            excluded.append((pair.id, "reference normalizes to zero words"))
            continue
        partition, _ = keyword_partition(
            sentence, provider, gamma=cfg.gamma, stopwords=stopwords
        )
        k_positions = eligible_positions(sentence.words, partition.keywords)
        nk_positions = eligible_positions(sentence.words, partition.non_keywords)
        if len(k_positions) < n_words or len(nk_positions) < n_words:
            excluded.append(
                (
                    pair.id,
                    f"needs {n_words} eligible words per side, has "
                    f"{len(k_positions)} keyword / {len(nk_positions)} non-keyword",
                )
            )
            continue
        rng = _selection_rng(seed, sentence.text)
        chosen_k = set(rng.sample(k_positions, n_words))
        chosen_nk = set(rng.sample(nk_positions, n_words))
        hyp_a = " ".join(
            strip_vowels(w) if i in chosen_k else w for i, w in enumerate(sentence.words)
        )
        hyp_b = " ".join(
            strip_vowels(w) if i in chosen_nk else w for i, w in enumerate(sentence.words)
        )
        set_a.append(TranscriptPair(id=pair.id, ref=pair.ref, hyp=hyp_a))
        set_b.append(TranscriptPair(id=pair.id, ref=pair.ref, hyp=hyp_b))
    return GeneratedSets(set_a=set_a, set_b=set_b, excluded=excluded)


# ---------------------------------------------------------------------------
# Batch evaluation
# ---------------------------------------------------------------------------


@dataclass
class EvalReport:
    """Per-pair breakdowns, per-pair failures, aggregates, and a correlation
    block between two metric columns."""

    breakdowns: list[ScoreBreakdown]
    failures: list[tuple[str, str]]  # (pair id, error message)
    aggregates: dict
    correlation: dict

    def as_dict(self, precision: int = 6) -> dict:
        return {
            "pairs": [b.as_dict(precision) for b in self.breakdowns],
            "failures": [{"id": i, "error": msg} for i, msg in self.failures],
            "aggregates": self.aggregates,
            "correlation": self.correlation,
        }

    def column(self, name: str) -> list[float]:
        if name not in ScoreBreakdown.METRIC_FIELDS:
            raise InputError(
                f"unknown metric column {name!r}; expected one of "
                f"{ScoreBreakdown.METRIC_FIELDS}"
            )
        values = []
        for b in self.breakdowns:
            if name in ("n_wk", "n_wnk", "n_k", "n_nk", "insertions"):
                values.append(float(getattr(b.counts, name)))
            else:
                values.append(float(getattr(b, name)))
        return values


def _mean(values: list[float]) -> float | None:
    return float(np.mean(values)) if values else None


def batch_evaluate(
    pairs: list[TranscriptPair],
    cfg: HybridConfig,
    provider: EmbeddingProvider,
    stopwords: StopwordList | None = None,
    correlate: tuple[str, str] = ("wer", "hsd"),
) -> EvalReport:
    """Score every pair, isolating per-pair failures; aggregate the successes.

    A pair with a missing hyp is scored against the empty hypothesis (pure
    deletion). Results keep input order, so permuting the input permutes the
    rows and leaves the aggregates unchanged. Per-pair failures are recorded,
    not raised, except when every single pair fails.
    """
    if stopwords is None:
        stopwords = default_stopwords()
    breakdowns: list[ScoreBreakdown] = []
    failures: list[tuple[str, str]] = []
    for pair in pairs:
        try:
            breakdowns.append(
                score_pair(
                    pair.ref,
                    pair.hyp or "",
                    cfg,
                    provider,
                    stopwords=stopwords,
                    pair_id=pair.id,
                )
            )
        except HybridSdError as exc:
            failures.append((pair.id, str(exc)))
    if pairs and not breakdowns:
        first_id, first_msg = failures[0]
        raise InputError(
            f"all {len(pairs)} pairs failed to score; first failure "
            f"({first_id}): {first_msg}"
        )
    aggregates = {
        "pairs": len(pairs),
        "scored": len(breakdowns),
        "failed": len(failures),
        "mean_wer": _mean([b.wer for b in breakdowns]),
        "mean_sd": _mean([b.sd for b in breakdowns]),
        "mean_nker": _mean([b.nker for b in breakdowns]),
        "mean_hsd": _mean([b.hsd for b in breakdowns]),
    }
    report = EvalReport(
        breakdowns=breakdowns, failures=failures, aggregates=aggregates, correlation={}
    )
    x_name, y_name = correlate
    correlation: dict = {"x": x_name, "y": y_name, "n": len(breakdowns)}
    try:
        correlation["pearson"] = pearson(report.column(x_name), report.column(y_name))
        correlation["spearman"] = spearman(report.column(x_name), report.column(y_name))
    except UndefinedCorrelationError as exc:
        correlation["pearson"] = None
        correlation["spearman"] = None
        correlation["note"] = str(exc)
    report.correlation = correlation
    return report


# ---------------------------------------------------------------------------
# Correlation statistics
# ---------------------------------------------------------------------------


def pearson(x: list[float], y: list[float]) -> float:
    """Sample Pearson correlation; undefined for n < 2 or zero variance."""
    x_arr = np.asarray(x, dtype=np.float64)
    y_arr = np.asarray(y, dtype=np.float64)
    if x_arr.shape != y_arr.shape or x_arr.ndim != 1:
        raise InputError("pearson needs two equal-length 1-d samples")
    if x_arr.size < 2:
        raise UndefinedCorrelationError("pearson needs at least 2 points")
    dx = x_arr - x_arr.mean()
    dy = y_arr - y_arr.mean()
    denom = float(np.sqrt(np.sum(dx * dx) * np.sum(dy * dy)))
    if denom == 0.0:
        raise UndefinedCorrelationError("pearson is undefined for zero-variance input")
    return float(np.sum(dx * dy) / denom)


def midranks(values: list[float]) -> list[float]:
    """1-based ranks with ties sharing the average of their rank span."""
    arr = np.asarray(values, dtype=np.float64)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(arr.size, dtype=np.float64)
    i = 0
    while i < arr.size:
        j = i
        while j + 1 < arr.size and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks.tolist()


def spearman(x: list[float], y: list[float]) -> float:
    """Spearman rank correlation: Pearson over mid-ranks (ties averaged)."""
    if len(x) != len(y):
        raise InputError("spearman needs two equal-length samples")
    if len(x) < 2:
        raise UndefinedCorrelationError("spearman needs at least 2 points")
    try:
        return pearson(midranks(x), midranks(y))
    except UndefinedCorrelationError:
        raise UndefinedCorrelationError(
            "spearman is undefined when either sample is all ties"
        ) from None
