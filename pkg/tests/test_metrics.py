import random
from fractions import Fraction

import pytest

from topicconf.harness import (
    EvalReport,
    aggregate,
    balanced_accuracy,
    decompose_errors,
    evaluate,
    exact_percentages,
    random_chance,
)

GROUPS = {"a1": 1, "a2": 1, "a7": 2, "a8": 2}


def test_decomposition_cases():
    assert decompose_errors(["a1"], ["a1"], GROUPS).correct == 1
    assert decompose_errors(["a1"], ["a2"], GROUPS).same_group == 1
    assert decompose_errors(["a1"], ["a7"], GROUPS).cross_group == 1


def test_length_mismatch():
    with pytest.raises(ValueError):
        decompose_errors(["a1"], [], GROUPS)
    with pytest.raises(ValueError):
        balanced_accuracy(["a1", "a2"], ["a1"])


def test_percentages_sum_exactly_and_are_close():
    rng = random.Random(0)
    for _ in range(2000):
        counts = [rng.randint(0, 50) for _ in range(3)]
        if sum(counts) == 0:
            continue
        pcts = exact_percentages(counts)
        assert sum(pcts) == 100.0
        assert pcts[0] + pcts[1] + pcts[2] == 100.0
        for c, p in zip(counts, pcts):
            assert abs(Fraction(p) - Fraction(100 * c, sum(counts))) < Fraction(1, 10**12)
            assert (p == 0.0) == (c == 0)


def test_balanced_accuracy_examples():
    assert balanced_accuracy(["a", "b", "b"], ["a", "b", "b"]) == 1.0
    assert balanced_accuracy(["a", "a", "b"], ["a", "a", "a"]) == 0.5
    # predicted-only classes do not count
    assert balanced_accuracy(["a", "a"], ["a", "z"]) == 0.5


def test_balanced_accuracy_matches_recount():
    rng = random.Random(1)
    for _ in range(300):
        truth = [rng.choice("abcd") for _ in range(rng.randint(1, 30))]
        preds = [rng.choice("abcde") for _ in truth]
        recalls = []
        for c in sorted(set(truth)):
            idx = [i for i, t in enumerate(truth) if t == c]
            recalls.append(sum(preds[i] == c for i in idx) / len(idx))
        assert balanced_accuracy(truth, preds) == pytest.approx(sum(recalls) / len(recalls), abs=1e-15)


def test_random_chance_values():
    correct, same, cross = random_chance(12, (6, 6))
    assert (round(correct, 1), round(same, 1), round(cross, 1)) == (8.3, 41.7, 50.0)
    assert random_chance(4, (2, 2)) == (25.0, 25.0, 50.0)
    with pytest.raises(ValueError):
        random_chance(12, (5, 7))


def test_evaluate_without_groups_has_no_decomposition():
    r = evaluate(["a", "b"], ["a", "a"])
    assert r.correct_pct is None and r.accuracy == 0.5


def test_aggregate_sample_sd():
    reports = [EvalReport(accuracy=v, balanced_accuracy=v, n_predictions=1) for v in (80.0, 84.0)]
    agg = aggregate(reports)
    assert agg["accuracy"].mean == 82.0
    assert agg["accuracy"].sd == pytest.approx(2.8284271247, abs=1e-9)
    same = aggregate([reports[0]] * 3)
    assert same["accuracy"].sd == 0.0
    assert "correct_pct" not in agg
