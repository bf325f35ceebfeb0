"""Train/validation/test splits for the three evaluation scenarios.

* Topic confusion: authors are split into two equal groups. Training uses
  group 1 on the first topic and group 2 on the second; testing swaps the
  two topics; all remaining topics form the validation set.
* Cross-topic: one topic trains, one validates, the rest test.
* Same-topic: the pooled corpus is split 26/26/48 percent, stratified by
  author.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from topicconf.corpus.model import Corpus, Document

log = logging.getLogger(__name__)

N_SELECTED_AUTHORS = 12
SAME_TOPIC_FRACTIONS = (0.26, 0.26)


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionConfig:
    topic_order: tuple[str, ...]
    selected_authors: tuple[str, ...]
    group_of: Mapping[str, int]
    seed: int

    def __post_init__(self):
        n = len(self.selected_authors)
        if n < 4 or n % 2:
            raise SplitError(f"need an even number of at least 4 authors, got {n}")
        if set(self.group_of) != set(self.selected_authors):
            raise SplitError("group_of must cover exactly the selected authors")
        sizes = [sum(g == k for g in self.group_of.values()) for k in (1, 2)]
        if sizes[0] != sizes[1] or sum(sizes) != n:
            raise SplitError(f"groups must be of equal size, got {sizes}")
        if len(set(self.topic_order)) != len(self.topic_order) or len(self.topic_order) < 3:
            raise SplitError("topic_order needs at least 3 distinct topics")

    @property
    def train_topics(self) -> tuple[str, str]:
        return self.topic_order[0], self.topic_order[1]

    @property
    def validation_topics(self) -> tuple[str, ...]:
        return self.topic_order[2:]

    def group(self, k: int) -> tuple[str, ...]:
        return tuple(a for a in self.selected_authors if self.group_of[a] == k)

    def swapped(self) -> "ConfusionConfig":
        """The same configuration with the two training topics exchanged."""
        t1, t2, *rest = self.topic_order
        return ConfusionConfig((t2, t1, *rest), self.selected_authors, self.group_of, self.seed)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "topic_order": list(self.topic_order),
            "group_1": list(self.group(1)),
            "group_2": list(self.group(2)),
        }


@dataclass(frozen=True)
class ScenarioSplit:
    label: str
    train: tuple[str, ...]
    val: tuple[str, ...]
    test: tuple[str, ...]

    def __post_init__(self):
        tr, va, te = set(self.train), set(self.val), set(self.test)
        if tr & va or tr & te or va & te:
            raise SplitError(f"split {self.label!r}: train/val/test overlap")

    def check_against(self, corpus: Corpus) -> None:
        missing = [i for i in (*self.train, *self.val, *self.test) if i not in corpus]
        if missing:
            raise SplitError(f"split {self.label!r}: unknown document ids {missing[:5]}")

    def sizes(self) -> tuple[int, int, int]:
        return len(self.train), len(self.val), len(self.test)


def make_confusion_config(corpus: Corpus, seed: int, n_authors: int = N_SELECTED_AUTHORS) -> ConfusionConfig:
    """Randomly order the topics, pick the authors and split them into two groups.

    ``n_authors`` authors are sampled when the corpus has more; with fewer,
    all are used (dropping one at random if the count is odd). Everything
    is driven by ``seed`` alone.
    """
    if len(corpus.topics) < 3:
        raise SplitError(f"topic confusion needs at least 3 topics, corpus has {len(corpus.topics)}")
    available = len(corpus.authors)
    k = min(n_authors, available)
    k -= k % 2
    if k < 4:
        raise SplitError(f"topic confusion needs at least 4 authors, corpus has {available}")
    rng = np.random.default_rng(seed)
    topic_order = tuple(corpus.topics[i] for i in rng.permutation(len(corpus.topics)))
    picked = rng.choice(available, size=k, replace=False) if k < available else np.arange(available)
    picked = np.sort(picked)
    selected = tuple(corpus.authors[i] for i in picked)
    shuffled = rng.permutation(k)
    group_of = {selected[j]: 1 if pos < k // 2 else 2 for pos, j in enumerate(shuffled)}
    return ConfusionConfig(topic_order, selected, group_of, seed)


def build_confusion_split(config: ConfusionConfig, corpus: Corpus) -> ScenarioSplit:
    t1, t2 = config.train_topics
    cells: dict[tuple[str, str], list[str]] = {}
    for doc in corpus:
        cells.setdefault((doc.author, doc.topic), []).append(doc.id)
    for author in config.selected_authors:
        for topic in (t1, t2):
            if not cells.get((author, topic)):
                raise SplitError(f"no documents for author {author!r} on topic {topic!r}")

    def docs(authors, topics):
        return tuple(i for a in authors for t in topics for i in cells.get((a, t), []))

    g1, g2 = config.group(1), config.group(2)
    train = docs(g1, [t1]) + docs(g2, [t2])
    test = docs(g1, [t2]) + docs(g2, [t1])
    val = docs(config.selected_authors, config.validation_topics)
    if not val:
        raise SplitError("validation topics hold no documents for the selected authors")
    return ScenarioSplit(f"confusion/seed={config.seed}", train, val, test)


def build_cross_topic_splits(corpus: Corpus) -> list[ScenarioSplit]:
    """One split per ordered (training topic, validation topic) pair."""
    topics = corpus.topics
    if len(topics) < 3:
        raise SplitError(f"cross-topic splits need at least 3 topics, corpus has {len(topics)}")
    by_topic = {t: tuple(d.id for d in corpus if d.topic == t) for t in topics}
    splits = []
    for train_t, val_t in itertools.permutations(topics, 2):
        test = tuple(i for t in topics if t not in (train_t, val_t) for i in by_topic[t])
        splits.append(ScenarioSplit(f"cross/{train_t}->{val_t}", by_topic[train_t], by_topic[val_t], test))
    return splits


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _apportion(sizes: Sequence[int], target: int) -> list[int]:
    """Largest-remainder allocation of ``target`` proportional to ``sizes``."""
    total = sum(sizes)
    quotas = [s * target / total for s in sizes]
    alloc = [math.floor(q) for q in quotas]
    order = sorted(range(len(sizes)), key=lambda i: (-(quotas[i] - alloc[i]), i))
    for i in order[: target - sum(alloc)]:
        alloc[i] += 1
    return alloc


def build_same_topic_split(corpus: Corpus, seed: int) -> ScenarioSplit:
    """Author-stratified 26/26/48 split of the pooled corpus.

    Train and validation sizes are ``round(0.26 * N)`` each (132/132/244 for
    508 documents). Authors with fewer than 3 documents cannot be split and
    go entirely to training.
    """
    if len(corpus) == 0:
        raise SplitError("cannot split an empty corpus")
    rng = np.random.default_rng(seed)
    n = len(corpus)
    n_train = _round_half_up(SAME_TOPIC_FRACTIONS[0] * n)
    n_val = _round_half_up(SAME_TOPIC_FRACTIONS[1] * n)

    by_author: dict[str, list[Document]] = {a: [] for a in corpus.authors}
    for doc in corpus:
        by_author[doc.author].append(doc)
    train, val, test = [], [], []
    splittable = []
    for author, docs in by_author.items():
        if len(docs) < 3:
            log.warning("author %r has %d documents; all go to training", author, len(docs))
            train.extend(d.id for d in docs)
        elif docs:
            splittable.append(author)
    sizes = [len(by_author[a]) for a in splittable]
    if splittable:
        tr_alloc = _apportion(sizes, max(0, n_train - len(train)))
        rest = [s - t for s, t in zip(sizes, tr_alloc)]
        va_alloc = _apportion(rest, min(n_val, sum(rest)))
        for author, n_tr, n_va in zip(splittable, tr_alloc, va_alloc):
            ids = [by_author[author][i].id for i in rng.permutation(len(by_author[author]))]
            train.extend(ids[:n_tr])
            val.extend(ids[n_tr:n_tr + n_va])
            test.extend(ids[n_tr + n_va:])
    return ScenarioSplit(f"same/seed={seed}", tuple(train), tuple(val), tuple(test))
