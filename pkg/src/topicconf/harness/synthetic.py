"""Synthetic corpora where style and topic are known by construction.

Every author has a private distribution over function words and every
topic a private vocabulary of content words. A document interleaves the
two, so function-word features identify the author while content words
identify only the topic.
"""

from __future__ import annotations

import string

import numpy as np

from topicconf.corpus.model import Corpus, Document
from topicconf.features.stylometric import load_function_words


def _pseudo_words(rng: np.random.Generator, n: int, taken: set[str]) -> list[str]:
    letters = np.array(list(string.ascii_lowercase))
    words = []
    while len(words) < n:
        w = "".join(rng.choice(letters, size=int(rng.integers(4, 10))))
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def style_topic_corpus(
    n_authors: int = 12,
    n_topics: int = 4,
    docs_per_cell: int = 10,
    doc_length: int = 200,
    function_share: float = 0.5,
    style_concentration: float = 0.3,
    topic_vocab: int = 150,
    seed: int = 0,
) -> Corpus:
    """Generate ``n_authors x n_topics x docs_per_cell`` documents.

    ``style_concentration`` is the Dirichlet parameter of each author's
    function-word distribution; smaller values make authors more distinct.
    Content words follow a Zipf-like distribution over the topic vocabulary.
    """
    rng = np.random.default_rng(seed)
    function_words = [w for w in load_function_words() if "'" not in w]
    taken = set(function_words)
    author_dists = rng.dirichlet(np.full(len(function_words), style_concentration), size=n_authors)
    ranks = np.arange(1, topic_vocab + 1)
    zipf = (1.0 / ranks) / (1.0 / ranks).sum()
    topic_words = [_pseudo_words(rng, topic_vocab, taken) for _ in range(n_topics)]

    authors = [f"author{a:02d}" for a in range(n_authors)]
    topics = [f"topic{t}" for t in range(n_topics)]
    docs = []
    for a, author in enumerate(authors):
        for t, topic in enumerate(topics):
            for d in range(docs_per_cell):
                is_fw = rng.random(doc_length) < function_share
                n_fw = int(is_fw.sum())
                fw = rng.choice(len(function_words), size=n_fw, p=author_dists[a])
                cw = rng.choice(topic_vocab, size=doc_length - n_fw, p=zipf)
                fw_iter, cw_iter = iter(fw), iter(cw)
                tokens = [function_words[next(fw_iter)] if f else topic_words[t][next(cw_iter)]
                          for f in is_fw]
                docs.append(Document(f"{author}-{topic}-{d}", author, topic, _render(tokens)))
    return Corpus(tuple(docs))


def _render(tokens: list[str], sentence_length: int = 15) -> str:
    sentences = []
    for i in range(0, len(tokens), sentence_length):
        words = tokens[i:i + sentence_length]
        words[0] = words[0].capitalize()
        sentences.append(" ".join(words) + ".")
    return " ".join(sentences)
