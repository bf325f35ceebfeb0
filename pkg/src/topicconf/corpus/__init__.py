"""Corpus data model, statistics, balance checks and article retrieval."""

from topicconf.corpus.fetch import (
    FetchAuthError,
    FetchReport,
    GuardianClient,
    assemble_corpus,
    fetch_articles,
    read_url_list,
)
from topicconf.corpus.model import (
    BalanceReport,
    Corpus,
    CorpusError,
    CorpusStats,
    Document,
    EmptyCorpusError,
    RecordError,
    corpus_stats,
    load_corpus,
    save_corpus,
    validate_balance,
)

__all__ = [
    "BalanceReport",
    "Corpus",
    "CorpusError",
    "CorpusStats",
    "Document",
    "EmptyCorpusError",
    "FetchAuthError",
    "FetchReport",
    "GuardianClient",
    "RecordError",
    "assemble_corpus",
    "corpus_stats",
    "fetch_articles",
    "load_corpus",
    "read_url_list",
    "save_corpus",
    "validate_balance",
]
