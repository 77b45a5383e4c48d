"""Transcript normalization, stopword filtering, and wordpiece tokenization.

Normalization is deliberately simple: lowercase, strip punctuation (keeping
apostrophes inside words), split on whitespace. It is idempotent, so already
normalized text passes through unchanged.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import InputError, ParseError

UNKNOWN_PIECE = "[unk]"
CONTINUATION_MARKER = "##"

# Characters always granted single-character pieces by the vocab builder, so
# tokenization of normalized English text can never dead-end.
BASE_ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789'"

# Curly apostrophes fold to the plain one before punctuation stripping.
_APOSTROPHE_VARIANTS = {"’": "'", "ʼ": "'"}


def _is_punctuation(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class Sentence:
    """A transcript with its normalized word tokens."""

    raw: str
    words: tuple[str, ...]

    @property
    def text(self) -> str:
        """Canonical normalized form; the exact-match key for embedding stores."""
        return " ".join(self.words)

    def __len__(self) -> int:
        return len(self.words)


def normalize(raw: str) -> Sentence:
    """Lowercase, strip punctuation (keeping intra-word apostrophes), split.

    Empty or whitespace-only input yields a sentence with no words.
    """
    lowered = raw.lower()
    chars: list[str] = []
    for i, ch in enumerate(lowered):
        ch = _APOSTROPHE_VARIANTS.get(ch, ch)
        if ch == "'":
            # Keep only apostrophes with a letter or digit on both sides.
            prev_ok = i > 0 and lowered[i - 1].isalnum()
            next_ok = i + 1 < len(lowered) and lowered[i + 1].isalnum()
            chars.append("'" if prev_ok and next_ok else " ")
        elif _is_punctuation(ch):
            chars.append(" ")
        else:
            chars.append(ch)
    words = tuple("".join(chars).split())
    return Sentence(raw=raw, words=words)


def word_sentence(word: str) -> Sentence:
    """Wrap one already-normalized word as a single-word sentence."""
    return Sentence(raw=word, words=(word,))


# ---------------------------------------------------------------------------
# Stopwords
# ---------------------------------------------------------------------------

StopwordList = frozenset[str]


def load_stopwords(path: str | Path) -> StopwordList:
    """Load a stopword list: one lowercase token per line, `#` comments allowed."""
    words: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            token = line.strip()
            if not token or token.startswith("#"):
                continue
            words.add(token.lower())
    if not words:
        raise InputError(f"stopword list {path} is empty")
    return frozenset(words)


def default_stopwords() -> StopwordList:
    """The packaged English stopword list (NLTK's 179-entry corpus)."""
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        ref = resources.files("hybridsd.data") / "stopwords_en.txt"
        with resources.as_file(ref) as path:
            _DEFAULT_STOPWORDS = load_stopwords(path)
    return _DEFAULT_STOPWORDS


_DEFAULT_STOPWORDS: StopwordList | None = None


def filter_stopwords(sentence: Sentence, stopwords: StopwordList) -> tuple[str, ...]:
    """Unique non-stopword words of a sentence, original order preserved."""
    seen: set[str] = set()
    kept: list[str] = []
    for word in sentence.words:
        if word in stopwords or word in seen:
            continue
        seen.add(word)
        kept.append(word)
    return tuple(kept)


# ---------------------------------------------------------------------------
# Wordpiece vocabulary and tokenizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PieceVocab:
    """Subword pieces split into word-initial and continuation sets.

    Continuation pieces are stored without their `##` marker. Every character
    of the vocab alphabet is guaranteed to be present in both sets, which makes
    greedy tokenization total over that alphabet.
    """

    initial: frozenset[str]
    continuation: frozenset[str]
    max_piece_len: int = field(init=False, default=0)

    def __post_init__(self) -> None:
        if not self.initial or not self.continuation:
            raise InputError("piece vocab needs at least one piece of each kind")
        alphabet = {ch for piece in self.initial | self.continuation for ch in piece}
        missing = sorted(
            ch for ch in alphabet if ch not in self.initial or ch not in self.continuation
        )
        if missing:
            raise InputError(
                "piece vocab must contain every alphabet character as both a "
                f"word-initial and a continuation piece; missing: {missing}"
            )
        longest = max(len(p) for p in self.initial | self.continuation)
        object.__setattr__(self, "max_piece_len", longest)

    @property
    def alphabet(self) -> frozenset[str]:
        return frozenset(ch for piece in self.initial | self.continuation for ch in piece)

    def __len__(self) -> int:
        return len(self.initial) + len(self.continuation)

    def __contains__(self, piece: str) -> bool:
        if piece.startswith(CONTINUATION_MARKER):
            return piece[len(CONTINUATION_MARKER):] in self.continuation
        return piece in self.initial


def load_piece_vocab(path: str | Path) -> PieceVocab:
    """Load a piece vocab: one piece per line, `##` prefix marks continuations."""
    initial: set[str] = set()
    continuation: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            piece = line.strip()
            if not piece:
                continue
            if piece.startswith(CONTINUATION_MARKER):
                body = piece[len(CONTINUATION_MARKER):]
                if not body:
                    raise ParseError("bare continuation marker", str(path), lineno)
                continuation.add(body)
            else:
                initial.add(piece)
    try:
        return PieceVocab(initial=frozenset(initial), continuation=frozenset(continuation))
    except InputError as exc:
        raise ParseError(str(exc), str(path)) from exc


def save_piece_vocab(vocab: PieceVocab, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for piece in sorted(vocab.initial):
            fh.write(piece + "\n")
        for piece in sorted(vocab.continuation):
            fh.write(CONTINUATION_MARKER + piece + "\n")


def default_piece_vocab() -> PieceVocab:
    """The packaged piece vocab derived from a common-English word list."""
    global _DEFAULT_VOCAB
    if _DEFAULT_VOCAB is None:
        ref = resources.files("hybridsd.data") / "pieces_en.txt"
        with resources.as_file(ref) as path:
            _DEFAULT_VOCAB = load_piece_vocab(path)
    return _DEFAULT_VOCAB


_DEFAULT_VOCAB: PieceVocab | None = None


def wordpiece_tokenize(word: str, vocab: PieceVocab) -> list[str]:
    """Greedy longest-match-first decomposition of one word into pieces.

    Characters outside the vocab alphabet (and any otherwise untokenizable
    position) emit the designated unknown piece and advance one character, so
    tokenization always terminates and, over the vocab alphabet, the pieces
    concatenate back to the input word.
    """
    if not word:
        raise InputError("cannot tokenize an empty word")
    pieces: list[str] = []
    pos = 0
    n = len(word)
    while pos < n:
        table = vocab.initial if pos == 0 else vocab.continuation
        end = min(n, pos + vocab.max_piece_len)
        match = None
        while end > pos:
            candidate = word[pos:end]
            if candidate in table:
                match = candidate
                break
            end -= 1
        if match is None:
            pieces.append(UNKNOWN_PIECE)
            pos += 1
        else:
            pieces.append(match if pos == 0 else CONTINUATION_MARKER + match)
            pos = end
    return pieces


def join_pieces(pieces: list[str]) -> str:
    """Concatenate pieces back into a word, dropping continuation markers."""
    return "".join(
        p[len(CONTINUATION_MARKER):] if p.startswith(CONTINUATION_MARKER) else p
        for p in pieces
    )


def build_piece_vocab(
    words: list[str],
    min_count: int = 3,
    max_piece_len: int = 8,
    extra_alphabet: str = BASE_ALPHABET,
) -> PieceVocab:
    """Derive a piece vocab from a word list by substring frequency.

    Word-initial candidates are prefixes; continuation candidates are
    substrings starting after position 0. A candidate is kept when it occurs
    in at least `min_count` distinct words. All single characters seen in the
    corpus, plus `extra_alphabet`, are always included in both piece sets.
    """
    initial_counts: Counter[str] = Counter()
    continuation_counts: Counter[str] = Counter()
    alphabet = set(extra_alphabet)
    for word in set(words):
        if not word:
            continue
        alphabet.update(word)
        n = len(word)
        for end in range(1, min(n, max_piece_len) + 1):
            initial_counts[word[:end]] += 1
        for start in range(1, n):
            for end in range(start + 1, min(n, start + max_piece_len) + 1):
                continuation_counts[word[start:end]] += 1
    initial = {p for p, c in initial_counts.items() if c >= min_count and len(p) > 1}
    continuation = {p for p, c in continuation_counts.items() if c >= min_count and len(p) > 1}
    initial.update(alphabet)
    continuation.update(alphabet)
    return PieceVocab(initial=frozenset(initial), continuation=frozenset(continuation))
