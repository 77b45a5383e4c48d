"""Command-line front end.

Subcommands: score, keywords, batch, induce, correlate. Exit codes are
scriptable: 0 success, 2 usage error, 3 input/parse error, 4 embedding
provider error, 5 internal error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import __version__
from .align import render_diff
from .corpus import (
    DEFAULT_SEED,
    EvalReport,
    batch_evaluate,
    generate_sets,
    load_pairs,
    pearson,
    save_pairs,
    spearman,
)
from .embed import (
    EmbeddingProvider,
    ReferenceEmbedder,
    RemoteEmbedder,
    store_load,
)
from .errors import (
    HybridSdError,
    InputError,
    ProviderError,
    UndefinedMetricError,
)
from .hybrid import DEFAULT_P, HybridConfig, ScoreBreakdown, score_pair
from .keywords import DEFAULT_GAMMA, keyword_partition
from .textnorm import normalize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_PROVIDER = 4
EXIT_INTERNAL = 5


def build_provider(spec: str, seed: int, timeout: float) -> EmbeddingProvider:
    """Resolve an embedder spec: `reference`, `store:PATH`, or `remote:URL`."""
    if spec == "reference":
        return ReferenceEmbedder(seed=seed)
    if spec.startswith("store:"):
        path = spec[len("store:"):]
        try:
            return store_load(path)
        except OSError as exc:
            raise InputError(f"cannot read embedding store {path!r}: {exc}") from exc
    if spec.startswith("remote:"):
        return RemoteEmbedder(spec[len("remote:"):], timeout=timeout)
    raise InputError(
        f"unknown embedder {spec!r}; expected reference, store:PATH, or remote:URL"
    )


def _add_metric_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, default=DEFAULT_GAMMA,
                        help="keyword threshold on min-max-scaled word scores")
    parser.add_argument("--p", type=float, default=DEFAULT_P,
                        help="keyword error weight relative to non-keyword errors")
    parser.add_argument("--embedder", default="reference",
                        help="embedding backend: reference, store:PATH, or remote:URL")
    parser.add_argument("--count-insertions", action="store_true",
                        help="count each inserted word as a wrong non-keyword")
    parser.add_argument("--normalized-alpha", action="store_true",
                        help="rescale the two weighting coefficients to sum to 1")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for the reference embedder and corruption choices")
    parser.add_argument("--timeout", type=float, default=10.0,
                        help="remote embedder timeout in seconds")


def _config(args: argparse.Namespace) -> HybridConfig:
    try:
        return HybridConfig(
            gamma=args.gamma,
            p=args.p,
            count_insertions=args.count_insertions,
            normalized_alpha=args.normalized_alpha,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2))


def _breakdown_table(breakdown: ScoreBreakdown) -> str:
    lines = [render_diff(breakdown.alignment), ""]
    lines.append(f"keywords:     {' '.join(sorted(breakdown.partition.keywords)) or '-'}")
    lines.append(f"non-keywords: {' '.join(sorted(breakdown.partition.non_keywords)) or '-'}")
    lines.append("")
    for name in ("wer", "sd", "nker", "alpha1", "alpha2", "hsd"):
        lines.append(f"{name:<8} {getattr(breakdown, name):>10.6f}")
    counts = breakdown.counts
    lines.append(
        f"errors   keywords {counts.n_wk}/{counts.n_k}, "
        f"non-keywords {counts.n_wnk}/{counts.n_nk}, insertions {counts.insertions}"
    )
    return "\n".join(lines)


def cmd_score(args: argparse.Namespace) -> int:
    provider = build_provider(args.embedder, args.seed, args.timeout)
    breakdown = score_pair(args.ref, args.hyp, _config(args), provider)
    if args.format == "table":
        print(_breakdown_table(breakdown))
    else:
        _print_json(breakdown.as_dict())
    return EXIT_OK


def cmd_keywords(args: argparse.Namespace) -> int:
    provider = build_provider(args.embedder, args.seed, args.timeout)
    sentence = normalize(args.sentence)
    partition, scores = keyword_partition(sentence, provider, gamma=args.gamma)
    rows = [
        {
            "word": word,
            "raw": round(scores.raw[word], 6),
            "scaled": round(scores.scaled[word], 6),
            "keyword": word in partition.keywords,
        }
        for word in scores.raw
    ]
    if args.format == "table":
        print(f"{'word':<20} {'raw':>10} {'scaled':>10}  keyword")
        for row in rows:
            print(
                f"{row['word']:<20} {row['raw']:>10.6f} {row['scaled']:>10.6f}  "
                f"{'yes' if row['keyword'] else 'no'}"
            )
        print(f"non-keywords: {' '.join(sorted(partition.non_keywords)) or '-'}")
    else:
        _print_json(
            {
                "sentence": sentence.text,
                "gamma": args.gamma,
                "words": rows,
                "keywords": sorted(partition.keywords),
                "non_keywords": sorted(partition.non_keywords),
            }
        )
    return EXIT_OK


def _write_pair_csv(report: EvalReport, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("id",) + ScoreBreakdown.METRIC_FIELDS)
    for b in report.breakdowns:
        row = [b.pair_id]
        for name in ScoreBreakdown.METRIC_FIELDS:
            if name in ("n_wk", "n_wnk", "n_k", "n_nk", "insertions"):
                row.append(getattr(b.counts, name))
            else:
                row.append(f"{getattr(b, name):.6f}")
        writer.writerow(row)


def cmd_batch(args: argparse.Namespace) -> int:
    provider = build_provider(args.embedder, args.seed, args.timeout)
    pairs = load_pairs(args.input, args.input_format)
    report = batch_evaluate(
        pairs, _config(args), provider, correlate=(args.corr_x, args.corr_y)
    )
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(report.as_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8") as fh:
            _write_pair_csv(report, fh)
    if args.scatter_out:
        with open(args.scatter_out, "w", encoding="utf-8") as fh:
            fh.write(f"{args.corr_x},{args.corr_y}\n")
            for x, y in zip(report.column(args.corr_x), report.column(args.corr_y)):
                fh.write(f"{x:.6f},{y:.6f}\n")
    if args.format == "csv":
        _write_pair_csv(report, sys.stdout)
    elif not args.output:
        _print_json(report.as_dict())
    else:
        _print_json({"aggregates": report.aggregates, "correlation": report.correlation})
    return EXIT_OK


def cmd_induce(args: argparse.Namespace) -> int:
    provider = build_provider(args.embedder, args.seed, args.timeout)
    pairs = load_pairs(args.input, args.input_format)
    sets = generate_sets(
        pairs, _config(args), provider, n_words=args.n_words, seed=args.seed
    )
    summary = {
        "input_pairs": len(pairs),
        "generated": len(sets.set_a),
        "excluded": [{"id": i, "reason": reason} for i, reason in sets.excluded],
    }
    if args.target in ("keywords", "both"):
        save_pairs(sets.set_a, args.out_a)
        summary["set_a"] = args.out_a
    if args.target in ("nonkeywords", "both"):
        save_pairs(sets.set_b, args.out_b)
        summary["set_b"] = args.out_b
    _print_json(summary)
    return EXIT_OK


def cmd_correlate(args: argparse.Namespace) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            document = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read report {args.report!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"report {args.report!r} is not valid JSON: {exc}") from exc
    rows = document.get("pairs")
    if not isinstance(rows, list):
        raise InputError("report lacks a `pairs` list; expected batch output")

    def column(name: str) -> list[float]:
        values = []
        for index, row in enumerate(rows):
            if name not in row or row[name] is None:
                raise InputError(f"pair {index} has no value for column {name!r}")
            values.append(float(row[name]))
        return values

    x, y = column(args.x), column(args.y)
    _print_json(
        {
            "x": args.x,
            "y": args.y,
            "n": len(x),
            "pearson": round(pearson(x, y), 6),
            "spearman": round(spearman(x, y), 6),
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridsd",
        description="Score ASR hypotheses with WER, sentence dissimilarity, "
        "and the hybrid keyword-weighted metric.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt_kwargs = {"formatter_class": argparse.ArgumentDefaultsHelpFormatter}

    p_score = sub.add_parser("score", help="score one reference/hypothesis pair",
                             **fmt_kwargs)
    p_score.add_argument("ref", help="reference (ground truth) transcript")
    p_score.add_argument("hyp", help="ASR hypothesis transcript")
    p_score.add_argument("--format", choices=("json", "table"), default="json",
                         help="output rendering")
    _add_metric_flags(p_score)
    p_score.set_defaults(func=cmd_score)

    p_kw = sub.add_parser("keywords", help="show the keyword/non-keyword partition",
                          **fmt_kwargs)
    p_kw.add_argument("sentence", help="sentence to partition")
    p_kw.add_argument("--format", choices=("json", "table"), default="json",
                      help="output rendering")
    _add_metric_flags(p_kw)
    p_kw.set_defaults(func=cmd_keywords)

    p_batch = sub.add_parser("batch", help="score a corpus file", **fmt_kwargs)
    p_batch.add_argument("input", help="corpus file (jsonl, csv, or tsv)")
    p_batch.add_argument("--input-format", choices=("jsonl", "csv", "tsv"), default=None,
                         help="corpus format (default: inferred from extension)")
    p_batch.add_argument("--format", choices=("json", "csv"), default="json",
                         help="stdout rendering")
    p_batch.add_argument("--output", default=None,
                         help="write the full JSON report to this path")
    p_batch.add_argument("--csv-out", default=None,
                         help="write per-pair metric rows as csv to this path")
    p_batch.add_argument("--scatter-out", default=None,
                         help="write plot-ready x,y columns as csv to this path")
    p_batch.add_argument("--corr-x", default="wer",
                         help="metric column for the report's correlation block (x)")
    p_batch.add_argument("--corr-y", default="hsd",
                         help="metric column for the report's correlation block (y)")
    _add_metric_flags(p_batch)
    p_batch.set_defaults(func=cmd_batch)

    p_induce = sub.add_parser(
        "induce", help="generate vowel-removal corruption sets from references",
        **fmt_kwargs)
    p_induce.add_argument("input", help="corpus file with references")
    p_induce.add_argument("--input-format", choices=("jsonl", "csv", "tsv"), default=None,
                          help="corpus format (default: inferred from extension)")
    p_induce.add_argument("--target", choices=("keywords", "nonkeywords", "both"),
                          default="both", help="which corruption set(s) to write")
    p_induce.add_argument("--n-words", type=int, default=1,
                          help="corrupted words per sentence")
    p_induce.add_argument("--out-a", default="set_a.jsonl",
                          help="output path for the keyword-corrupted set")
    p_induce.add_argument("--out-b", default="set_b.jsonl",
                          help="output path for the non-keyword-corrupted set")
    _add_metric_flags(p_induce)
    p_induce.set_defaults(func=cmd_induce)

    p_corr = sub.add_parser("correlate",
                            help="correlate two metric columns of a batch report",
                            **fmt_kwargs)
    p_corr.add_argument("report", help="JSON report produced by `hybridsd batch`")
    p_corr.add_argument("--x", default="wer", help="first metric column")
    p_corr.add_argument("--y", default="hsd", help="second metric column")
    p_corr.set_defaults(func=cmd_correlate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, UndefinedMetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ProviderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PROVIDER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HybridSdError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
