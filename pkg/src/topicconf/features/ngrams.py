"""Character, word and POS n-gram vocabularies and relative-frequency vectors."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from topicconf.features.space import FeatureMatrix, FeatureSpace, SparseVector, prefixed
from topicconf.textprep.postag import pos_tags
from topicconf.textprep.tokenize import tokenize_words

Level = Literal["char", "word", "pos"]
LEVELS = ("char", "word", "pos")

_WS_RE = re.compile(r"\s+")
_PLACEHOLDERS = frozenset("*#")


class EmptyVocabularyError(ValueError):
    pass


def _text_of(doc) -> str:
    return doc if isinstance(doc, str) else doc.text


def normalize_whitespace(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def word_units(text: str) -> list[str]:
    """Lowercased word and number tokens.

    Contiguous runs of mask placeholders (``*``/``#``) are merged into one
    unit so that masked words survive as tokens in masked text.
    """
    units = []
    run_end = -1
    for tok in tokenize_words(text):
        if tok.kind in ("word", "number"):
            units.append(tok.surface.lower())
        elif tok.surface in _PLACEHOLDERS:
            if tok.start == run_end and units and set(units[-1]) <= _PLACEHOLDERS:
                units[-1] += tok.surface
            else:
                units.append(tok.surface)
            run_end = tok.end
    return units


def units(doc, level: Level, pos_provider: str = "auto") -> str | list[str]:
    """The sequence an n-gram window slides over at ``level``."""
    if level == "char":
        return normalize_whitespace(_text_of(doc))
    if level == "word":
        return word_units(_text_of(doc))
    if level == "pos":
        if isinstance(doc, str):
            raise TypeError("POS n-grams need a document, not a bare string")
        return pos_tags(doc, pos_provider)
    raise ValueError(f"unknown n-gram level {level!r}")


def gram_counts(seq: str | Sequence[str], n: int) -> Counter:
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(seq, str):
        return Counter(seq[i:i + n] for i in range(len(seq) - n + 1))
    return Counter(" ".join(seq[i:i + n]) for i in range(len(seq) - n + 1))


@dataclass(frozen=True, eq=False)
class NgramVocab:
    """Fitted gram -> dimension mapping, ordered by training frequency."""

    level: Level
    n: int
    f_t: int
    grams: Mapping[str, int]
    counts: tuple[int, ...]
    fitted_on: str = "train"
    pos_provider: str = "auto"
    name: str = ""  # feature-name prefix; defaults to the level
    space: FeatureSpace = field(init=False, repr=False)

    def __post_init__(self):
        block = f"{self.name or self.level}{self.n}"
        object.__setattr__(self, "space", FeatureSpace(prefixed(block, self.grams)))

    def __len__(self) -> int:
        return len(self.grams)

    def restrict(self, f_t: int) -> "NgramVocab":
        """The vocabulary this one would be at a higher threshold."""
        if f_t < self.f_t:
            raise ValueError(f"cannot lower threshold from {self.f_t} to {f_t}")
        keep = sum(c >= f_t for c in self.counts)
        if keep == 0:
            raise EmptyVocabularyError(_empty_message(self.level, self.n, f_t))
        grams = list(self.grams)[:keep]
        return NgramVocab(self.level, self.n, f_t, {g: i for i, g in enumerate(grams)},
                          self.counts[:keep], self.fitted_on, self.pos_provider, self.name)


def _empty_message(level, n, f_t) -> str:
    return f"no {level} {n}-gram occurs at least {f_t} times; try a lower f_t"


def fit_ngram_vocab(
    docs: Sequence,
    level: Level,
    n: int,
    f_t: int = 1,
    fitted_on: str = "train",
    pos_provider: str = "auto",
) -> NgramVocab:
    """Keep grams whose total frequency over ``docs`` is at least ``f_t``.

    Dimensions are assigned by descending frequency, ties broken
    lexicographically.
    """
    if not docs:
        raise ValueError("cannot fit a vocabulary on zero documents")
    total = Counter()
    for doc in docs:
        total.update(gram_counts(units(doc, level, pos_provider), n))
    return vocab_from_counts(total, level, n, f_t, fitted_on, pos_provider)


def vocab_from_counts(total: Counter, level: Level, n: int, f_t: int,
                      fitted_on: str = "train", pos_provider: str = "auto", name: str = "") -> NgramVocab:
    ordered = sorted((kv for kv in total.items() if kv[1] >= f_t), key=lambda kv: (-kv[1], kv[0]))
    if not ordered:
        raise EmptyVocabularyError(_empty_message(level, n, f_t))
    grams = {g: i for i, (g, _) in enumerate(ordered)}
    return NgramVocab(level, n, f_t, grams, tuple(c for _, c in ordered), fitted_on, pos_provider, name)


def relative_counts(counts: Counter, vocab: NgramVocab) -> dict[int, float]:
    total = sum(counts.values())
    if total == 0:
        return {}
    grams = vocab.grams
    return {grams[g]: c / total for g, c in counts.items() if g in grams}


def extract_ngrams(doc, vocab: NgramVocab) -> SparseVector:
    """Count of each vocabulary gram over all grams of the document.

    Grams missing from the vocabulary still count towards the denominator.
    """
    counts = gram_counts(units(doc, vocab.level, vocab.pos_provider), vocab.n)
    return SparseVector(vocab.space, relative_counts(counts, vocab))


def ngram_matrix(docs: Iterable, vocab: NgramVocab) -> FeatureMatrix:
    return counts_matrix(
        (gram_counts(units(d, vocab.level, vocab.pos_provider), vocab.n) for d in docs), vocab
    )


def counts_matrix(per_doc: Iterable[Counter], vocab: NgramVocab) -> FeatureMatrix:
    rows = [relative_counts(c, vocab) for c in per_doc]
    out = np.zeros((len(rows), len(vocab)))
    for i, row in enumerate(rows):
        if row:
            out[i, list(row)] = list(row.values())
    return FeatureMatrix(vocab.space, out)
