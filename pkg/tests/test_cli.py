import csv
import json

import pytest

from conftest import guardian_like_corpus
from topicconf.cli import main
from topicconf.corpus.model import save_corpus


@pytest.fixture()
def news_path(tmp_path):
    p = tmp_path / "news.jsonl"
    save_corpus(guardian_like_corpus(), p)
    return p


def test_fetch_without_key_is_usage_error(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("GUARDIAN_API_KEY", raising=False)
    urls = tmp_path / "u.txt"
    urls.write_text("uk/2011/b\n")
    assert main(["fetch", str(urls)]) == 2
    assert "GUARDIAN_API_KEY" in capsys.readouterr().err


def test_fetch_dry_run_needs_no_network_or_key(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("GUARDIAN_API_KEY", raising=False)
    urls = tmp_path / "u.txt"
    urls.write_text("# list\nhttps://www.theguardian.com/uk/2011/b\nworld/2012/c\n")
    assert main(["fetch", str(urls), "--dry-run"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "GET https://content.guardianapis.com/uk/2011/b",
        "GET https://content.guardianapis.com/world/2012/c",
    ]


def test_stats_table_and_csv(news_path, tmp_path, capsys):
    out_csv = tmp_path / "stats.csv"
    assert main(["stats", str(news_path), "--csv", str(out_csv)]) == 0
    text = capsys.readouterr().out
    assert "Articles             508" in text
    rows = list(csv.DictReader(open(out_csv)))
    assert len(rows) == 13 + 4
    assert (tmp_path / "manifest.json").exists()


def test_stats_missing_path(tmp_path, capsys):
    assert main(["stats", str(tmp_path / "nope.jsonl")]) == 1
    assert "error" in capsys.readouterr().err


def test_validate_exit_codes(news_path, capsys):
    assert main(["validate", str(news_path), "--min-per-cell", "10"]) == 1
    assert "society" in capsys.readouterr().out
    assert main(["validate", str(news_path), "--min-per-cell", "5"]) == 0


def test_mask_text_file(tmp_path, capsys):
    text = tmp_path / "t.txt"
    text.write_text("The colour is odd 42")
    wl = tmp_path / "wl.txt"
    wl.write_text("the\nis\n")
    assert main(["mask", str(text), "-k", "2", "--freqlist", str(wl)]) == 0
    assert capsys.readouterr().out == "The ****** is *** ##"


def test_confusion_compare_and_grid(tmp_path, small_synthetic, capsys):
    corpus = tmp_path / "c.jsonl"
    save_corpus(small_synthetic, corpus)
    cfg = tmp_path / "exp.yaml"
    cfg.write_text("corpus: c.jsonl\npipelines: [stylo]\nn_configs: 2\nrepeats: 2\n")
    assert main(["confusion", "--config", str(cfg), "--out", str(tmp_path / "r")]) == 0
    assert "Correct " in capsys.readouterr().out
    # flags before the subcommand are honoured too
    assert main(["--seed", "3", "confusion", "--config", str(cfg), "--out", str(tmp_path / "r3")]) == 0
    assert json.loads((tmp_path / "r3" / "manifest.json").read_text())["master_seed"] == 3
    results = str(tmp_path / "r" / "results.csv")
    assert main(["compare", results, results, "--out", str(tmp_path / "cmp.json")]) == 0
    cmp = json.loads((tmp_path / "cmp.json").read_text())
    assert cmp["tests"]["accuracy"]["p"] == 1.0
    assert main(["grid", "--corpus", str(corpus), "--pipelines", "word", "--grid", '{"n_w": [1], "f_t": [1, 3]}',
                 "--out", str(tmp_path / "g")]) == 0
    grid = json.loads((tmp_path / "g" / "grid.json").read_text())
    assert len(grid["pipelines"]["word"]["points"]) == 2


def test_experiment_needs_corpus(capsys):
    assert main(["confusion"]) == 2
