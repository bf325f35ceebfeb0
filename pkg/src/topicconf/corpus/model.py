"""Corpus data model, serialization, descriptive statistics and balance checks."""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal, Sequence

from topicconf.textprep.tokenize import tokenize_words

Format = Literal["jsonl", "csv"]
REQUIRED_FIELDS = ("id", "author", "topic", "text")


class CorpusError(ValueError):
    pass


class RecordError(CorpusError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyCorpusError(CorpusError):
    pass


@dataclass(frozen=True)
class Document:
    id: str
    author: str
    topic: str
    text: str
    pos_tags: tuple[str, ...] | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise CorpusError(f"document {self.id!r} has empty text")
        if self.pos_tags is not None:
            object.__setattr__(self, "pos_tags", tuple(self.pos_tags))
            n = len(tokenize_words(self.text).words())
            if len(self.pos_tags) != n:
                raise CorpusError(
                    f"document {self.id!r}: {len(self.pos_tags)} POS tags for {n} word tokens"
                )

    def to_record(self) -> dict:
        rec = {"id": self.id, "author": self.author, "topic": self.topic, "text": self.text}
        if self.pos_tags is not None:
            rec["pos_tags"] = list(self.pos_tags)
        return rec


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    authors: tuple[str, ...] = ()
    topics: tuple[str, ...] = ()
    _by_id: dict[str, Document] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        docs = tuple(self.documents)
        object.__setattr__(self, "documents", docs)
        by_id = {}
        for doc in docs:
            if doc.id in by_id:
                raise CorpusError(f"duplicate document id {doc.id!r}")
            by_id[doc.id] = doc
        object.__setattr__(self, "_by_id", by_id)
        if not self.authors:
            object.__setattr__(self, "authors", tuple(dict.fromkeys(d.author for d in docs)))
        if not self.topics:
            object.__setattr__(self, "topics", tuple(dict.fromkeys(d.topic for d in docs)))
        authors, topics = set(self.authors), set(self.topics)
        for doc in docs:
            if doc.author not in authors:
                raise CorpusError(f"document {doc.id!r}: unknown author {doc.author!r}")
            if doc.topic not in topics:
                raise CorpusError(f"document {doc.id!r}: unknown topic {doc.topic!r}")

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, doc_id: str) -> Document:
        return self._by_id[doc_id]

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def get(self, ids: Iterable[str]) -> list[Document]:
        return [self._by_id[i] for i in ids]

    def cell(self, author: str, topic: str) -> list[Document]:
        return [d for d in self.documents if d.author == author and d.topic == topic]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for doc in self.documents:
            h.update(json.dumps(doc.to_record(), sort_keys=True, ensure_ascii=False).encode())
            h.update(b"\n")
        return h.hexdigest()


_CSV_EMPTY_TAGS = "[]"


def _document_from_record(rec: dict, line: int) -> Document:
    if not isinstance(rec, dict):
        raise RecordError(line, "record is not an object")
    missing = [f for f in REQUIRED_FIELDS if rec.get(f) in (None, "")]
    if missing:
        raise RecordError(line, f"missing field(s) {', '.join(missing)}")
    tags = rec.get("pos_tags")
    if isinstance(tags, str):
        # CSV cell: space-separated tags, "" for none, "[]" for an empty list
        tags = [] if tags.strip() == _CSV_EMPTY_TAGS else (tags.split() or None)
    try:
        return Document(
            id=str(rec["id"]),
            author=str(rec["author"]),
            topic=str(rec["topic"]),
            text=str(rec["text"]),
            pos_tags=tuple(tags) if tags is not None else None,
        )
    except CorpusError as exc:
        raise RecordError(line, str(exc)) from None


def _read_jsonl(path: Path) -> list[Document]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RecordError(lineno, f"invalid JSON ({exc.msg})") from None
            docs.append(_document_from_record(rec, lineno))
    return docs


def _read_csv(path: Path) -> list[Document]:
    docs = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            docs.append(_document_from_record(rec, reader.line_num))
    return docs


def load_corpus(path: str | Path, format: Format | None = None) -> Corpus:
    """Load a corpus from line-delimited JSON or CSV.

    The format is inferred from the file suffix when not given. Authors and
    topics are ordered by first appearance.
    """
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format == "jsonl":
        docs = _read_jsonl(path)
    elif format == "csv":
        docs = _read_csv(path)
    else:
        raise ValueError(f"unknown corpus format {format!r}")
    if not docs:
        raise EmptyCorpusError(f"{path} contains no documents")
    seen = set()
    for doc in docs:
        if doc.id in seen:
            raise CorpusError(f"{path}: duplicate document id {doc.id!r}")
        seen.add(doc.id)
    return Corpus(tuple(docs))


def save_corpus(corpus: Corpus, path: str | Path, format: Format | None = None) -> None:
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for doc in corpus:
                fh.write(json.dumps(doc.to_record(), ensure_ascii=False) + "\n")
    elif format == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=[*REQUIRED_FIELDS, "pos_tags"])
            writer.writeheader()
            for doc in corpus:
                rec = doc.to_record()
                if doc.pos_tags is None:
                    rec["pos_tags"] = ""
                else:
                    rec["pos_tags"] = " ".join(doc.pos_tags) or _CSV_EMPTY_TAGS
                writer.writerow(rec)
    else:
        raise ValueError(f"unknown corpus format {format!r}")


@dataclass(frozen=True)
class Summary:
    mean: float
    sd: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "Summary":
        return cls(statistics.fmean(values), statistics.pstdev(values))


@dataclass(frozen=True)
class CorpusStats:
    n_docs: int
    n_authors: int
    n_topics: int
    n_words: int
    docs_per_author: dict[str, int]
    docs_per_topic: dict[str, int]
    words_per_author: dict[str, int]
    words_per_topic: dict[str, int]
    docs_per_author_summary: Summary
    docs_per_topic_summary: Summary
    words_per_author_summary: Summary
    words_per_topic_summary: Summary
    words_per_doc: float

    def rows(self) -> list[dict]:
        """One row per author and per topic, for CSV export."""
        rows = [
            {"kind": "author", "name": a, "documents": n, "words": self.words_per_author[a]}
            for a, n in self.docs_per_author.items()
        ]
        rows += [
            {"kind": "topic", "name": t, "documents": n, "words": self.words_per_topic[t]}
            for t, n in self.docs_per_topic.items()
        ]
        return rows

    def format_table(self) -> str:
        def fmt(s: Summary) -> str:
            return f"{s.mean:,.1f} (SD={s.sd:,.1f})"

        lines = [
            "Total number of:",
            f"  Topics               {self.n_topics}",
            f"  Authors              {self.n_authors}",
            f"  Articles             {self.n_docs}",
            f"  Words                {self.n_words:,}",
            "Average number of:",
            f"  Articles / Author    {fmt(self.docs_per_author_summary)}",
            f"  Articles / Topic     {fmt(self.docs_per_topic_summary)}",
            f"  Words / Author       {fmt(self.words_per_author_summary)}",
            f"  Words / Topic        {fmt(self.words_per_topic_summary)}",
            f"  Words / Document     {self.words_per_doc:,.1f}",
            "Number of articles per topic:",
            *(f"  {t:<20} {n}" for t, n in self.docs_per_topic.items()),
            "Number of articles per author:",
            *(f"  {a:<20} {n}" for a, n in self.docs_per_author.items()),
        ]
        return "\n".join(lines)


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Counts and population mean/SD over authors and topics.

    Word counts are word and number tokens from ``tokenize_words``.
    """
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot compute statistics of an empty corpus")
    docs_a = dict.fromkeys(corpus.authors, 0)
    docs_t = dict.fromkeys(corpus.topics, 0)
    words_a = dict.fromkeys(corpus.authors, 0)
    words_t = dict.fromkeys(corpus.topics, 0)
    total_words = 0
    for doc in corpus:
        n = len(tokenize_words(doc.text).words())
        total_words += n
        docs_a[doc.author] += 1
        docs_t[doc.topic] += 1
        words_a[doc.author] += n
        words_t[doc.topic] += n
    return CorpusStats(
        n_docs=len(corpus),
        n_authors=len(corpus.authors),
        n_topics=len(corpus.topics),
        n_words=total_words,
        docs_per_author=docs_a,
        docs_per_topic=docs_t,
        words_per_author=words_a,
        words_per_topic=words_t,
        docs_per_author_summary=Summary.of(list(docs_a.values())),
        docs_per_topic_summary=Summary.of(list(docs_t.values())),
        words_per_author_summary=Summary.of(list(words_a.values())),
        words_per_topic_summary=Summary.of(list(words_t.values())),
        words_per_doc=total_words / len(corpus),
    )


@dataclass(frozen=True)
class BalanceReport:
    min_per_cell: int
    cells: dict[tuple[str, str], int]
    deficient: tuple[tuple[str, str, int], ...]

    @property
    def passed(self) -> bool:
        return not self.deficient


def validate_balance(corpus: Corpus, min_per_cell: int) -> BalanceReport:
    """Flag every (author, topic) cell holding fewer than ``min_per_cell`` documents."""
    cells = {(a, t): 0 for a in corpus.authors for t in corpus.topics}
    for doc in corpus:
        cells[doc.author, doc.topic] += 1
    deficient = tuple((a, t, n) for (a, t), n in cells.items() if n < min_per_cell)
    return BalanceReport(min_per_cell, cells, deficient)
