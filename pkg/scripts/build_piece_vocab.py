#!/usr/bin/env python3
"""Regenerate the packaged piece vocabulary from scripts/wordlist_en.txt."""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from hybridsd.textnorm import build_piece_vocab, save_piece_vocab  # noqa: E402

WORDLIST = ROOT / "scripts" / "wordlist_en.txt"
TARGET = ROOT / "src" / "hybridsd" / "data" / "pieces_en.txt"


def main() -> None:
    words = [
        line.strip()
        for line in WORDLIST.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    # The 4-char cap keeps shared stems visible to the hash embedder: with
    # longer pieces, frequent words tokenize to themselves and related forms
    # (smoke/smoking) would share no pieces at all.
    vocab = build_piece_vocab(words, min_count=3, max_piece_len=4)
    save_piece_vocab(vocab, TARGET)
    print(
        f"{len(words)} words -> {len(vocab.initial)} initial + "
        f"{len(vocab.continuation)} continuation pieces -> {TARGET}"
    )


if __name__ == "__main__":
    main()
