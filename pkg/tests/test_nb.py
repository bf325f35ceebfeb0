import math
import random

import numpy as np
import pytest

from topicconf.models import load_model, nb_posterior, nb_scores, predict_nb, save_model, train_nb


def test_hand_computed_posterior():
    # A: x3 y1 z1 (5 tokens); B: y3 z1 (4 tokens); vocabulary {x, y, z}; alpha 1
    model = train_nb(["x x y", "x z", "y y", "z y"], ["A", "A", "B", "B"], alpha=1.0)
    p_a = 0.5 * (4 / 8) * (2 / 8)
    p_b = 0.5 * (1 / 7) * (4 / 7)
    post = nb_posterior(model, "x y")
    assert abs(post[0] - p_a / (p_a + p_b)) < 1e-12
    assert abs(post[1] - 49 / 81 + 17 / 81) < 1e-12  # 32/81
    assert predict_nb(model, "x y") == "A"


def test_disjoint_vocabularies():
    docs, labels = ["apple pear", "pear plum", "rock stone", "stone sand"], ["f", "f", "g", "g"]
    model = train_nb(docs, labels)
    assert [predict_nb(model, d) for d in docs] == labels


def test_unseen_tokens_are_finite_and_oov_only_uses_prior():
    model = train_nb(["a b", "a", "c"], ["p", "p", "q"])
    assert np.all(np.isfinite(nb_scores(model, "a zzz")))
    assert np.allclose(nb_scores(model, "zzz qqq"), model.log_prior)
    assert predict_nb(model, "zzz") == "p"


def test_uniform_prior_indicative_token():
    model = train_nb(["a b", "c b"], ["p", "q"])
    assert predict_nb(model, "c") == "q"


def test_likelihoods_normalized():
    model = train_nb(["the cat sat", "a dog ran far", "the end"], ["x", "y", "x"], alpha=0.3)
    assert np.allclose(np.exp(model.log_likelihood).sum(axis=1), 1.0, atol=1e-9)


def test_errors():
    with pytest.raises(ValueError):
        train_nb(["a", "b"], ["p", "p"])
    with pytest.raises(ValueError):
        train_nb(["a", "b"], ["p", "q"], alpha=0)
    with pytest.raises(ValueError):
        train_nb(["a", "!!"], ["p", "q"])


def brute_force_scores(docs, labels, test, alpha):
    classes = list(dict.fromkeys(labels))
    vocab = sorted({w for d in docs for w in d.lower().split()})
    out = []
    for c in classes:
        toks = [w for d, l in zip(docs, labels) if l == c for w in d.lower().split()]
        score = math.log(labels.count(c) / len(labels))
        for w in test.lower().split():
            if w in vocab:
                score += math.log((toks.count(w) + alpha) / (len(toks) + alpha * len(vocab)))
        out.append(score)
    return out


def test_matches_brute_force_on_random_corpora():
    rng = random.Random(0)
    words = ["a", "b", "c", "d", "e", "f"]
    for _ in range(200):
        labels = [rng.choice("pqr") for _ in range(6)]
        if len(set(labels)) < 2:
            continue
        docs = [" ".join(rng.choice(words) for _ in range(rng.randint(1, 6))) for _ in labels]
        test = " ".join(rng.choice(words + ["zz"]) for _ in range(5))
        alpha = rng.choice([0.5, 1.0, 2.0])
        model = train_nb(docs, labels, alpha)
        expected = brute_force_scores(docs, labels, test, alpha)
        assert np.allclose(nb_scores(model, test), expected, rtol=0, atol=1e-12)
        best = max(range(len(expected)), key=lambda i: (expected[i], -i))
        assert predict_nb(model, test) == model.classes[best]


def test_save_load(tmp_path):
    model = train_nb(["a b", "c"], ["p", "q"], alpha=0.7)
    save_model(model, tmp_path / "nb.json")
    loaded = load_model(tmp_path / "nb.json")
    assert loaded.vocabulary == model.vocabulary and loaded.alpha == 0.7
    assert np.array_equal(loaded.log_likelihood, model.log_likelihood)
