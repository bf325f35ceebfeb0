"""Multinomial Naive Bayes over lowercased word tokens.

Scores follow ``log P(A=a) + sum_tokens log P(token | A=a)``; the topic is
not modelled separately, so it is absorbed into each author's token
distribution.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from topicconf.features.ngrams import word_units


@dataclass(frozen=True, eq=False)
class NBModel:
    classes: tuple[str, ...]
    log_prior: np.ndarray  # (n_classes,)
    vocabulary: dict[str, int]
    log_likelihood: np.ndarray  # (n_classes, |V|)
    alpha: float

    def token_log_likelihood(self, cls: str) -> dict[str, float]:
        row = self.log_likelihood[self.classes.index(cls)]
        return {tok: float(row[i]) for tok, i in self.vocabulary.items()}


def _tokens(doc) -> list[str]:
    return word_units(doc if isinstance(doc, str) else doc.text)


def train_nb(docs: Sequence, labels: Sequence[str], alpha: float = 1.0) -> NBModel:
    if alpha <= 0:
        raise ValueError("smoothing alpha must be positive")
    if len(docs) != len(labels):
        raise ValueError(f"{len(docs)} documents but {len(labels)} labels")
    classes = tuple(dict.fromkeys(labels))
    if len(classes) < 2:
        raise ValueError("need at least two classes")
    per_class = {c: Counter() for c in classes}
    n_docs = Counter(labels)
    for doc, label in zip(docs, labels):
        per_class[label].update(_tokens(doc))
    for c in classes:
        if not per_class[c]:
            raise ValueError(f"class {c!r} has no tokens")
    vocab = sorted(set().union(*per_class.values()))
    index = {tok: i for i, tok in enumerate(vocab)}
    counts = np.zeros((len(classes), len(vocab)))
    for c, cls in enumerate(classes):
        for tok, n in per_class[cls].items():
            counts[c, index[tok]] = n
    totals = counts.sum(axis=1, keepdims=True)
    log_likelihood = np.log(counts + alpha) - np.log(totals + alpha * len(vocab))
    log_prior = np.log(np.array([n_docs[c] for c in classes], dtype=float) / len(labels))
    return NBModel(classes, log_prior, index, log_likelihood, float(alpha))


def nb_scores(model: NBModel, doc) -> np.ndarray:
    """Unnormalised log posterior per class; out-of-vocabulary tokens are ignored."""
    counts = np.zeros(len(model.vocabulary))
    for tok in _tokens(doc):
        i = model.vocabulary.get(tok)
        if i is not None:
            counts[i] += 1
    return model.log_prior + model.log_likelihood @ counts


def nb_posterior(model: NBModel, doc) -> np.ndarray:
    scores = nb_scores(model, doc)
    shifted = np.exp(scores - scores.max())
    return shifted / shifted.sum()


def predict_nb(model: NBModel, doc) -> str:
    return model.classes[int(np.argmax(nb_scores(model, doc)))]
