"""Word-level edit-distance alignment, WER, and per-word error attribution."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, TYPE_CHECKING

from .errors import UndefinedWerError
from .textnorm import Sentence

if TYPE_CHECKING:  # pragma: no cover
    from .keywords import KeywordPartition

MATCH = "match"
SUBSTITUTE = "substitute"
DELETE = "delete"
INSERT = "insert"


class EditOp(NamedTuple):
    kind: str
    ref_index: Optional[int]
    hyp_index: Optional[int]


@dataclass(frozen=True)
class Alignment:
    """Minimal-cost edit script between two word sequences.

    Ref indices appear exactly once across match/substitute/delete ops, in
    increasing order; hyp indices likewise across match/substitute/insert.
    """

    ref_words: tuple[str, ...]
    hyp_words: tuple[str, ...]
    ops: tuple[EditOp, ...]

    @property
    def cost(self) -> int:
        return sum(1 for op in self.ops if op.kind != MATCH)

    @property
    def substitutions(self) -> int:
        return sum(1 for op in self.ops if op.kind == SUBSTITUTE)

    @property
    def deletions(self) -> int:
        return sum(1 for op in self.ops if op.kind == DELETE)

    @property
    def insertions(self) -> int:
        return sum(1 for op in self.ops if op.kind == INSERT)


@dataclass(frozen=True)
class ErrorCounts:
    """Error tallies split by the keyword/non-keyword partition."""

    n_wk: int
    n_wnk: int
    n_k: int
    n_nk: int
    insertions: int


def _suffix_distance_table(ref: tuple[str, ...], hyp: tuple[str, ...]) -> list[list[int]]:
    """d[i][j] = edit distance between ref[i:] and hyp[j:] under unit costs."""
    n, m = len(ref), len(hyp)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][m] = n - i
    for j in range(m + 1):
        d[n][j] = m - j
    for i in range(n - 1, -1, -1):
        row = d[i]
        below = d[i + 1]
        ref_word = ref[i]
        for j in range(m - 1, -1, -1):
            if ref_word == hyp[j]:
                row[j] = below[j + 1]
            else:
                best = below[j + 1]  # substitute
                if below[j] < best:  # delete
                    best = below[j]
                if row[j + 1] < best:  # insert
                    best = row[j + 1]
                row[j] = best + 1
    return d


def align(ref: Sentence, hyp: Sentence) -> Alignment:
    """Minimal-cost word alignment with deterministic tie-breaking.

    The edit script is traced front to back, preferring match, then
    substitute, then delete, then insert whenever costs tie. An empty ref
    against a nonempty hyp yields all insertions, and vice versa.
    """
    ref_words, hyp_words = ref.words, hyp.words
    d = _suffix_distance_table(ref_words, hyp_words)
    n, m = len(ref_words), len(hyp_words)
    ops: list[EditOp] = []
    i = j = 0
    while i < n or j < m:
        if i < n and j < m and ref_words[i] == hyp_words[j] and d[i][j] == d[i + 1][j + 1]:
            ops.append(EditOp(MATCH, i, j))
            i += 1
            j += 1
        elif i < n and j < m and d[i][j] == d[i + 1][j + 1] + 1:
            ops.append(EditOp(SUBSTITUTE, i, j))
            i += 1
            j += 1
        elif i < n and d[i][j] == d[i + 1][j] + 1:
            ops.append(EditOp(DELETE, i, None))
            i += 1
        else:
            ops.append(EditOp(INSERT, None, j))
            j += 1
    return Alignment(ref_words=ref_words, hyp_words=hyp_words, ops=tuple(ops))


def wer(alignment: Alignment, ref_len: int) -> float:
    """(substitutions + deletions + insertions) / ref_len; may exceed 1."""
    if ref_len <= 0:
        raise UndefinedWerError("WER is undefined for an empty reference")
    return alignment.cost / ref_len


def classify_errors(
    alignment: Alignment,
    partition: "KeywordPartition",
    count_insertions: bool = False,
) -> ErrorCounts:
    """Tally wrongly recognized keywords and non-keywords.

    A reference word is wrongly recognized when its alignment op is a
    substitute or delete; it counts against the keyword tally when its word
    type is in the partition's keyword set, otherwise against the non-keyword
    tally. Insertions are ignored by default; with `count_insertions` each one
    counts as a wrong non-keyword (NKER may then exceed 1).
    """
    keywords = partition.keywords
    n_k = sum(1 for w in alignment.ref_words if w in keywords)
    n_nk = len(alignment.ref_words) - n_k
    n_wk = n_wnk = inserted = 0
    for op in alignment.ops:
        if op.kind in (SUBSTITUTE, DELETE):
            if alignment.ref_words[op.ref_index] in keywords:
                n_wk += 1
            else:
                n_wnk += 1
        elif op.kind == INSERT:
            inserted += 1
    if count_insertions:
        n_wnk += inserted
    return ErrorCounts(n_wk=n_wk, n_wnk=n_wnk, n_k=n_k, n_nk=n_nk, insertions=inserted)


_GAP = "***"
_OP_TAGS = {MATCH: "", SUBSTITUTE: "S", DELETE: "D", INSERT: "I"}


def render_diff(alignment: Alignment) -> str:
    """Three-row text diff (ref / ops / hyp) with columns padded to width."""
    ref_row: list[str] = []
    tag_row: list[str] = []
    hyp_row: list[str] = []
    for op in alignment.ops:
        ref_word = alignment.ref_words[op.ref_index] if op.ref_index is not None else _GAP
        hyp_word = alignment.hyp_words[op.hyp_index] if op.hyp_index is not None else _GAP
        width = max(len(ref_word), len(hyp_word), 1)
        ref_row.append(ref_word.ljust(width))
        tag_row.append(_OP_TAGS[op.kind].ljust(width))
        hyp_row.append(hyp_word.ljust(width))
    return "\n".join(
        [
            ("REF: " + " ".join(ref_row)).rstrip(),
            ("     " + " ".join(tag_row)).rstrip(),
            ("HYP: " + " ".join(hyp_row)).rstrip(),
        ]
    )
