"""Command-line interface: outputs, exit codes, and file side effects."""

from __future__ import annotations

import json

import pytest

from hybridsd import cli
from hybridsd.corpus import TranscriptPair, load_pairs, save_pairs
from hybridsd.errors import HybridSdError


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_corpus(tmp_path, name="corpus.jsonl"):
    path = tmp_path / name
    pairs = [
        TranscriptPair(id="u1", ref="the flight is about to land",
                       hyp="te flight s about to land"),
        TranscriptPair(id="u2", ref="this is your captain speaking",
                       hyp="this is your kepten speaking"),
        TranscriptPair(id="u3", ref="please fasten your seatbelt",
                       hyp="please fasten your seat belt"),
    ]
    save_pairs(pairs, path)
    return path


class TestScore:
    def test_identical_pair(self, capsys):
        code, out, _ = run(capsys, "score", "Hello there", "hello there")
        assert code == 0
        payload = json.loads(out)
        assert payload["hsd"] == 0.0 and payload["wer"] == 0.0

    def test_json_schema(self, capsys):
        code, out, _ = run(capsys, "score", "the flight is about to land",
                           "te flight s about to land", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        for field in ("ref", "hyp", "wer", "sd", "nker", "alpha1", "alpha2", "hsd",
                      "n_wk", "n_wnk", "n_k", "n_nk", "insertions",
                      "keywords", "non_keywords", "gamma"):
            assert field in payload

    def test_table_format(self, capsys):
        code, out, _ = run(capsys, "score", "the flight lands", "the fight lands",
                           "--format", "table")
        assert code == 0
        assert out.startswith("REF:")
        assert "hsd" in out

    def test_stable_output_across_runs(self, capsys):
        args = ("score", "the crew checked the cabin", "the crew checked the kabin")
        first = run(capsys, *args)
        second = run(capsys, *args)
        assert first == second

    def test_missing_store_file_is_input_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "score", "a b", "a b",
                           "--embedder", f"store:{tmp_path}/absent.txt")
        assert code == cli.EXIT_INPUT
        assert "absent.txt" in err

    def test_store_miss_is_provider_error(self, capsys, tmp_path):
        store = tmp_path / "store.txt"
        store.write_text("dim 2\nthe flight\t1 0\n", encoding="utf-8")
        code, _, err = run(capsys, "score", "the flight", "the fight",
                           "--embedder", f"store:{store}")
        assert code == cli.EXIT_PROVIDER
        assert "the fight" in err

    def test_remote_unreachable_is_provider_error(self, capsys):
        code, _, err = run(capsys, "score", "a b", "a b",
                           "--embedder", "remote:http://127.0.0.1:1/x",
                           "--timeout", "0.2")
        assert code == cli.EXIT_PROVIDER

    def test_empty_reference_is_input_error(self, capsys):
        code, _, err = run(capsys, "score", "!!!", "words here")
        assert code == cli.EXIT_INPUT
        assert "zero words" in err

    def test_bad_gamma_is_input_error(self, capsys):
        code, _, _ = run(capsys, "score", "a b", "a b", "--gamma", "7")
        assert code == cli.EXIT_INPUT

    def test_unknown_embedder(self, capsys):
        code, _, err = run(capsys, "score", "a b", "a b", "--embedder", "magic")
        assert code == cli.EXIT_INPUT

    def test_usage_error_exits_two(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["score", "--no-such-flag"])
        assert exc.value.code == 2

    def test_internal_error_exits_five(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "score_pair",
                            lambda *a, **k: (_ for _ in ()).throw(HybridSdError("boom")))
        code, _, err = run(capsys, "score", "a b", "a b")
        assert code == cli.EXIT_INTERNAL
        assert "boom" in err


class TestKeywords:
    def test_all_stopwords_empty_partition(self, capsys):
        code, out, _ = run(capsys, "keywords", "it is a the an")
        assert code == 0
        payload = json.loads(out)
        assert payload["keywords"] == []
        assert sorted(payload["non_keywords"]) == ["a", "an", "is", "it", "the"]

    def test_table(self, capsys):
        code, out, _ = run(capsys, "keywords", "this is your captain speaking",
                           "--format", "table")
        assert code == 0
        assert "captain" in out and "scaled" in out

    def test_scores_reported(self, capsys):
        code, out, _ = run(capsys, "keywords", "the flight is about to land")
        payload = json.loads(out)
        words = {row["word"] for row in payload["words"]}
        assert words == {"flight", "land"}
        for row in payload["words"]:
            assert 0.0 <= row["scaled"] <= 1.0


class TestBatch:
    def test_empty_corpus(self, capsys, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        code, out, _ = run(capsys, "batch", str(path))
        assert code == 0
        payload = json.loads(out)
        assert payload["pairs"] == [] and payload["aggregates"]["scored"] == 0

    def test_full_report_stdout(self, capsys, tmp_path):
        code, out, _ = run(capsys, "batch", str(write_corpus(tmp_path)))
        assert code == 0
        payload = json.loads(out)
        assert len(payload["pairs"]) == 3
        assert payload["aggregates"]["scored"] == 3
        assert payload["correlation"]["x"] == "wer"

    def test_output_files(self, capsys, tmp_path):
        report_path = tmp_path / "report.json"
        csv_path = tmp_path / "rows.csv"
        scatter_path = tmp_path / "scatter.csv"
        code, out, _ = run(capsys, "batch", str(write_corpus(tmp_path)),
                           "--output", str(report_path),
                           "--csv-out", str(csv_path),
                           "--scatter-out", str(scatter_path))
        assert code == 0
        document = json.loads(report_path.read_text())
        assert len(document["pairs"]) == 3
        rows = csv_path.read_text().splitlines()
        assert rows[0].startswith("id,wer,sd,nker")
        assert len(rows) == 4
        scatter = scatter_path.read_text().splitlines()
        assert scatter[0] == "wer,hsd"
        assert len(scatter) == 4
        # stdout carries the summary, not the full report
        summary = json.loads(out)
        assert "pairs" not in summary and "aggregates" in summary

    def test_csv_stdout(self, capsys, tmp_path):
        code, out, _ = run(capsys, "batch", str(write_corpus(tmp_path)),
                           "--format", "csv")
        assert code == 0
        assert out.splitlines()[0].startswith("id,wer")

    def test_parse_error_exit(self, capsys, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("not json\n")
        code, _, err = run(capsys, "batch", str(path))
        assert code == cli.EXIT_INPUT
        assert "line" in err or ":1" in err


class TestInduce:
    def test_generates_both_sets(self, capsys, tmp_path):
        out_a = tmp_path / "a.jsonl"
        out_b = tmp_path / "b.jsonl"
        code, out, _ = run(capsys, "induce", str(write_corpus(tmp_path)),
                           "--out-a", str(out_a), "--out-b", str(out_b))
        assert code == 0
        summary = json.loads(out)
        assert summary["generated"] >= 2
        set_a = load_pairs(out_a)
        set_b = load_pairs(out_b)
        assert len(set_a) == len(set_b) == summary["generated"]
        assert all(p.hyp for p in set_a)

    def test_single_target(self, capsys, tmp_path):
        out_a = tmp_path / "a.jsonl"
        out_b = tmp_path / "b.jsonl"
        code, out, _ = run(capsys, "induce", str(write_corpus(tmp_path)),
                           "--target", "keywords",
                           "--out-a", str(out_a), "--out-b", str(out_b))
        assert code == 0
        assert out_a.exists() and not out_b.exists()


class TestCorrelate:
    def test_matches_in_process_value(self, capsys, tmp_path):
        from hybridsd.corpus import pearson as lib_pearson

        report_path = tmp_path / "report.json"
        run(capsys, "batch", str(write_corpus(tmp_path)), "--output", str(report_path))
        code, out, _ = run(capsys, "correlate", str(report_path), "--x", "wer", "--y", "hsd")
        assert code == 0
        payload = json.loads(out)
        document = json.loads(report_path.read_text())
        xs = [row["wer"] for row in document["pairs"]]
        ys = [row["hsd"] for row in document["pairs"]]
        assert payload["pearson"] == pytest.approx(round(lib_pearson(xs, ys), 6))
        assert payload["n"] == 3

    def test_missing_column(self, capsys, tmp_path):
        report_path = tmp_path / "report.json"
        run(capsys, "batch", str(write_corpus(tmp_path)), "--output", str(report_path))
        code, _, err = run(capsys, "correlate", str(report_path), "--x", "bogus")
        assert code == cli.EXIT_INPUT

    def test_missing_report(self, capsys, tmp_path):
        code, _, _ = run(capsys, "correlate", str(tmp_path / "none.json"))
        assert code == cli.EXIT_INPUT


class TestHelp:
    def test_defaults_enumerated(self, capsys):
        for sub in ("score", "keywords", "batch", "induce"):
            with pytest.raises(SystemExit) as exc:
                cli.main([sub, "--help"])
            assert exc.value.code == 0
            out = capsys.readouterr().out
            assert "--gamma" in out and "0.4" in out
            assert "--p" in out and "default: 2" in out
            assert "--embedder" in out and "--seed" in out

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--version"])
        assert exc.value.code == 0
