import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import guardian_like_corpus, make_corpus
from topicconf.corpus import (
    Corpus,
    CorpusError,
    Document,
    EmptyCorpusError,
    RecordError,
    corpus_stats,
    load_corpus,
    save_corpus,
    validate_balance,
)
from topicconf.textprep import tokenize_words


def write_jsonl(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")


def test_load_two_records(tmp_path):
    p = tmp_path / "c.jsonl"
    write_jsonl(p, [
        {"id": "1", "author": "a1", "topic": "politics", "text": "One."},
        {"id": "2", "author": "a2", "topic": "society", "text": "Two."},
    ])
    c = load_corpus(p)
    assert len(c) == 2
    assert c.authors == ("a1", "a2")
    assert c.topics == ("politics", "society")


def test_missing_field_names_line(tmp_path):
    p = tmp_path / "c.jsonl"
    write_jsonl(p, [
        {"id": "1", "author": "a", "topic": "t", "text": "x"},
        {"id": "2", "author": "a", "topic": "t", "text": "y"},
        {"id": "3", "topic": "t", "text": "z"},
    ])
    with pytest.raises(RecordError, match="line 3") as info:
        load_corpus(p)
    assert info.value.line == 3


def test_duplicate_ids_rejected(tmp_path):
    p = tmp_path / "c.jsonl"
    write_jsonl(p, [{"id": "1", "author": "a", "topic": "t", "text": "x"}] * 2)
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(p)


def test_empty_file(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text("", encoding="utf-8")
    with pytest.raises(EmptyCorpusError):
        load_corpus(p)


def test_document_invariants():
    with pytest.raises(ValueError):
        Document("1", "a", "t", "   ")
    with pytest.raises(ValueError):
        Document("1", "a", "t", "the cat", ("DT",))


def test_stats_small_example():
    c = Corpus((Document("1", "a", "t", "one two three"), Document("2", "a", "u", "a b c d e")))
    s = corpus_stats(c)
    assert s.words_per_author["a"] == 8
    assert s.docs_per_author_summary.mean == 2
    assert s.docs_per_author_summary.sd == 0


def test_stats_single_document():
    s = corpus_stats(Corpus((Document("1", "a", "t", "hello"),)))
    assert s.docs_per_author_summary.sd == 0


def test_stats_empty():
    with pytest.raises(EmptyCorpusError):
        corpus_stats(Corpus(()))


def test_news_corpus_shape_matches_reference_table():
    s = corpus_stats(guardian_like_corpus())
    assert (s.n_docs, s.n_authors, s.n_topics) == (508, 13, 4)
    assert s.docs_per_topic == {"politics": 130, "society": 118, "uk": 130, "world": 130}
    assert round(s.docs_per_author_summary.mean, 1) == 39.1
    assert round(s.docs_per_author_summary.sd, 1) == 1.5
    assert round(s.docs_per_topic_summary.mean) == 127
    assert round(s.docs_per_topic_summary.sd, 1) == 5.2
    assert "Articles             508" in s.format_table()


def test_news_corpus_balance_flags_only_society():
    report = validate_balance(guardian_like_corpus(), 10)
    assert not report.passed
    assert {t for _, t, _ in report.deficient} == {"society"}
    assert len(report.deficient) == 5


def test_balance_examples():
    even = make_corpus({(a, t): 5 for a in "xy" for t in ("p", "q")})
    assert validate_balance(even, 5).passed
    cells = {(a, t): 5 for a in "xy" for t in ("p", "q")}
    cells["y", "q"] = 4
    report = validate_balance(make_corpus(cells), 5)
    assert report.deficient == (("y", "q", 4),)


def test_stats_rows_one_per_author_and_topic():
    s = corpus_stats(guardian_like_corpus())
    rows = s.rows()
    assert len(rows) == 13 + 4
    assert sum(r["documents"] for r in rows if r["kind"] == "topic") == 508


record = st.builds(
    lambda a, t, text, tagged: (a, t, text, tagged),
    st.sampled_from(["a1", "a2", "b"]),
    st.sampled_from(["p", "q", "r"]),
    st.text(alphabet=st.sampled_from(list("ab ,.\"é\n1'")), min_size=1, max_size=30).filter(str.strip),
    st.booleans(),
)


def build(records):
    docs = []
    for i, (a, t, text, tagged) in enumerate(records):
        tags = tuple("NN" for _ in tokenize_words(text).words()) if tagged else None
        docs.append(Document(f"d{i}", a, t, text, tags))
    return Corpus(tuple(docs))


@settings(max_examples=50, deadline=None)
@given(st.lists(record, min_size=1, max_size=8), st.sampled_from(["jsonl", "csv"]))
def test_round_trip(tmp_path_factory, records, fmt):
    c = build(records)
    p = tmp_path_factory.mktemp("rt") / f"c.{fmt}"
    save_corpus(c, p)
    assert load_corpus(p) == c


@settings(max_examples=50)
@given(st.lists(record, min_size=1, max_size=12))
def test_stats_match_recount(records):
    c = build(records)
    s = corpus_stats(c)
    for a in c.authors:
        docs = [d for d in c if d.author == a]
        assert s.docs_per_author[a] == len(docs)
        assert s.words_per_author[a] == sum(len(tokenize_words(d.text).words()) for d in docs)
    assert sum(s.docs_per_topic.values()) == s.n_docs == len(records)
