"""Hybrid semantic/word-error scoring for ASR hypotheses.

Combines plain word error rate with an embedding-based sentence
dissimilarity and a keyword-aware non-keyword error rate into a single
hybrid score that tracks how much an ASR mistake actually hurts meaning.
"""

from .align import Alignment, EditOp, ErrorCounts, align, classify_errors, render_diff, wer
from .corpus import (
    EvalReport,
    GeneratedSets,
    TranscriptPair,
    batch_evaluate,
    generate_sets,
    induce_errors,
    load_pairs,
    pearson,
    save_pairs,
    spearman,
)
from .embed import (
    EmbeddingProvider,
    EmbeddingStore,
    ReferenceEmbedder,
    RemoteEmbedder,
    cosine,
    remote_embed,
    sd,
    sd_vectors,
    store_embed,
    store_load,
    store_save,
)
from .hybrid import HybridConfig, ScoreBreakdown, alpha_weights, hybrid_sd, score_pair
from .keywords import (
    KeywordPartition,
    WordScores,
    extract_keywords,
    keyword_partition,
    min_max_scale,
    nker,
    word_scores,
)
from .textnorm import (
    PieceVocab,
    Sentence,
    build_piece_vocab,
    default_piece_vocab,
    default_stopwords,
    filter_stopwords,
    load_piece_vocab,
    load_stopwords,
    normalize,
    wordpiece_tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "EditOp",
    "ErrorCounts",
    "EvalReport",
    "EmbeddingProvider",
    "EmbeddingStore",
    "GeneratedSets",
    "HybridConfig",
    "KeywordPartition",
    "PieceVocab",
    "ReferenceEmbedder",
    "RemoteEmbedder",
    "ScoreBreakdown",
    "Sentence",
    "TranscriptPair",
    "WordScores",
    "align",
    "alpha_weights",
    "batch_evaluate",
    "build_piece_vocab",
    "classify_errors",
    "cosine",
    "default_piece_vocab",
    "default_stopwords",
    "extract_keywords",
    "filter_stopwords",
    "generate_sets",
    "hybrid_sd",
    "induce_errors",
    "keyword_partition",
    "load_pairs",
    "load_piece_vocab",
    "load_stopwords",
    "min_max_scale",
    "nker",
    "normalize",
    "pearson",
    "remote_embed",
    "render_diff",
    "save_pairs",
    "score_pair",
    "sd",
    "sd_vectors",
    "spearman",
    "store_embed",
    "store_load",
    "store_save",
    "wer",
    "word_scores",
    "wordpiece_tokenize",
]
