"""Welch's unequal-variance t-test."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class WelchResult:
    t: float
    p: float
    df: float
    mean_a: float
    mean_b: float
    sd_a: float
    sd_b: float
    degenerate: bool = False


def welch_ttest(sample_a: Sequence[float], sample_b: Sequence[float]) -> WelchResult:
    """Two-tailed Welch t-test with Welch-Satterthwaite degrees of freedom.

    If both samples have zero variance the statistic is undefined; the
    limiting result is returned (``t=0, p=1`` for equal means, otherwise
    ``t=±inf, p=0``) with ``degenerate=True``.
    """
    a = [float(v) for v in sample_a]
    b = [float(v) for v in sample_b]
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least two values")
    na, nb = len(a), len(b)
    ma, mb = statistics.fmean(a), statistics.fmean(b)
    va, vb = statistics.variance(a), statistics.variance(b)
    sa, sb = math.sqrt(va), math.sqrt(vb)
    se2 = va / na + vb / nb
    if se2 == 0:
        if ma == mb:
            return WelchResult(0.0, 1.0, float(na + nb - 2), ma, mb, sa, sb, True)
        t = math.copysign(math.inf, ma - mb)
        return WelchResult(t, 0.0, float(na + nb - 2), ma, mb, sa, sb, True)
    t = (ma - mb) / math.sqrt(se2)
    df = se2**2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    p = float(min(1.0, 2.0 * stats.t.sf(abs(t), df)))
    return WelchResult(t, p, df, ma, mb, sa, sb)


def moment_matched_sample(n: int, mean: float, sd: float) -> np.ndarray:
    """``n`` evenly spread values with exactly the given mean and sample SD."""
    if n < 2:
        raise ValueError("need at least two values")
    base = np.linspace(-1.0, 1.0, n)
    base = (base - base.mean()) / base.std(ddof=1)
    return mean + sd * base
