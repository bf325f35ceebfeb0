"""Topic-confusion error decomposition, balanced accuracy and summaries."""

from __future__ import annotations

import math
import statistics
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

# Percentages are multiples of 2**-40 so that the three shares of a
# decomposition add up to exactly 100.0 in binary floating point.
_QUANTUM = 2**40


def exact_percentages(counts: Sequence[int]) -> tuple[float, ...]:
    """Percent shares of ``counts`` that sum to exactly 100.0.

    Each share is rounded to the 2**-40 grid by largest remainder, so a zero
    count maps to exactly 0.0 and the error per share is below 1e-12.
    """
    total = sum(counts)
    if total <= 0 or any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative with a positive total")
    exact = [Fraction(100 * _QUANTUM * c, total) for c in counts]
    floors = [math.floor(x) for x in exact]
    leftover = 100 * _QUANTUM - sum(floors)
    by_remainder = sorted(range(len(counts)), key=lambda i: (-(exact[i] - floors[i]), i))
    for i in by_remainder[:leftover]:
        floors[i] += 1
    return tuple(f / _QUANTUM for f in floors)


@dataclass(frozen=True)
class ErrorBreakdown:
    correct: int
    same_group: int
    cross_group: int

    @property
    def n(self) -> int:
        return self.correct + self.same_group + self.cross_group

    @property
    def percentages(self) -> tuple[float, float, float]:
        return exact_percentages((self.correct, self.same_group, self.cross_group))


def decompose_errors(
    truth: Sequence[str], preds: Sequence[str], group_of: Mapping[str, int]
) -> ErrorBreakdown:
    """Split predictions into correct, same-group and cross-group errors."""
    if len(truth) != len(preds):
        raise ValueError(f"{len(truth)} true labels but {len(preds)} predictions")
    if not truth:
        raise ValueError("no predictions to score")
    correct = same = cross = 0
    for t, p in zip(truth, preds):
        if t == p:
            correct += 1
        elif group_of[t] == group_of[p]:
            same += 1
        else:
            cross += 1
    return ErrorBreakdown(correct, same, cross)


def accuracy(truth: Sequence[str], preds: Sequence[str]) -> float:
    if len(truth) != len(preds):
        raise ValueError(f"{len(truth)} true labels but {len(preds)} predictions")
    if not truth:
        raise ValueError("no predictions to score")
    return sum(t == p for t, p in zip(truth, preds)) / len(truth)


def balanced_accuracy(truth: Sequence[str], preds: Sequence[str]) -> float:
    """Mean recall over the classes present in ``truth``."""
    if len(truth) != len(preds):
        raise ValueError(f"{len(truth)} true labels but {len(preds)} predictions")
    if not truth:
        raise ValueError("no predictions to score")
    hits: dict[str, int] = {}
    support: dict[str, int] = {}
    for t, p in zip(truth, preds):
        support[t] = support.get(t, 0) + 1
        hits[t] = hits.get(t, 0) + (t == p)
    return statistics.fmean(hits[c] / support[c] for c in support)


def random_chance(n_authors: int = 12, group_sizes: tuple[int, int] = (6, 6)) -> tuple[float, float, float]:
    """Expected (correct, same-group, cross-group) % of a uniform random guess."""
    if len(group_sizes) != 2 or sum(group_sizes) != n_authors:
        raise ValueError("group sizes must be two numbers summing to n_authors")
    g1, g2 = group_sizes
    if g1 != g2:
        raise ValueError("uneven author groups are not supported")
    return (100 / n_authors, 100 * (g1 - 1) / n_authors, 100 * g2 / n_authors)


METRICS = ("correct_pct", "same_group_err_pct", "cross_group_err_pct", "accuracy", "balanced_accuracy")


@dataclass(frozen=True)
class EvalReport:
    """Test-set scores of one experiment.

    The three group percentages are only defined when author groups exist
    (the topic-confusion task) and are ``None`` otherwise.
    """

    accuracy: float
    balanced_accuracy: float
    n_predictions: int
    correct_pct: float | None = None
    same_group_err_pct: float | None = None
    cross_group_err_pct: float | None = None
    config_ref: str = ""
    params: dict = field(default_factory=dict)
    n_features: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def evaluate(
    truth: Sequence[str],
    preds: Sequence[str],
    group_of: Mapping[str, int] | None = None,
    config_ref: str = "",
    params: dict | None = None,
    n_features: int = 0,
) -> EvalReport:
    pcts: tuple = (None, None, None)
    if group_of is not None:
        pcts = decompose_errors(truth, preds, group_of).percentages
    return EvalReport(
        accuracy=accuracy(truth, preds),
        balanced_accuracy=balanced_accuracy(truth, preds),
        n_predictions=len(truth),
        correct_pct=pcts[0],
        same_group_err_pct=pcts[1],
        cross_group_err_pct=pcts[2],
        config_ref=config_ref,
        params=dict(params or {}),
        n_features=n_features,
    )


@dataclass(frozen=True)
class MetricSummary:
    mean: float
    sd: float
    n: int


def aggregate(reports: Sequence[EvalReport]) -> dict[str, MetricSummary]:
    """Sample mean and SD (n - 1 denominator) of each defined metric.

    A single report gets SD 0.
    """
    if not reports:
        raise ValueError("nothing to aggregate")
    out = {}
    for metric in METRICS:
        values = [getattr(r, metric) for r in reports if getattr(r, metric) is not None]
        if not values:
            continue
        sd = statistics.stdev(values) if len(values) > 1 else 0.0
        out[metric] = MetricSummary(statistics.fmean(values), sd, len(values))
    return out
