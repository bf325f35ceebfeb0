import random
import warnings

import numpy as np
import pytest

from topicconf.corpus.model import Document
from topicconf.features import StyloConfig, StyloWarning, extract_stylometric, load_function_words, stylometric_matrix
from topicconf.features.stylometric import SPECIAL_CHARS


def features(text):
    return extract_stylometric(Document("d", "a", "t", text)).as_dict()


def get(vec, name):
    return vec.get(f"stylo:{name}", 0.0)


def test_hi_example():
    v = features("Hi!")
    assert get(v, "char_count") == 3
    assert get(v, "letter_ratio") == 2 / 3
    assert get(v, "upper_ratio") == 1 / 3
    assert get(v, "token_count") == 1
    assert get(v, "punct_!") == 1.0
    assert get(v, "letter_h") == 1 / 3 and get(v, "letter_i") == 1 / 3


def test_aa_bb_example():
    v = features("aa bb.")
    assert get(v, "token_count") == 2
    assert get(v, "avg_word_len") == 2.0
    assert get(v, "short_word_ratio") == 1.0
    assert get(v, "word_len_2") == 1.0
    assert get(v, "avg_sentence_len") == 6.0
    assert get(v, "type_token_ratio") == 1.0
    assert get(v, "punct_.") == 0.5


def test_function_word_frequency_over_tokens():
    v = features("The cat and the dog.")
    assert get(v, "fw_the") == 2 / 5
    assert get(v, "fw_and") == 1 / 5


def test_long_words_fall_in_last_bucket():
    v = features("a " + "x" * 25)
    assert get(v, "word_len_20") == 0.5 and get(v, "word_len_1") == 0.5


def test_default_dimension_and_config_constants():
    cfg = StyloConfig()
    assert len(cfg.function_words) == 277 == len(set(cfg.function_words))
    assert len(SPECIAL_CHARS) == 24
    assert len(cfg.space) == 55 + 26 + 8 + 277 == 366


def test_config_validation():
    with pytest.raises(ValueError):
        StyloConfig(special_chars=("<",))
    with pytest.raises(ValueError):
        StyloConfig(word_length_buckets=10)


def test_dimension_follows_function_word_list():
    cfg = StyloConfig(function_words=("the", "of"))
    assert len(cfg.space) == 89 + 2


def test_empty_text_rejected_and_no_words_warns():
    with pytest.raises(ValueError):
        features("")
    with pytest.warns(StyloWarning):
        v = features("?!")
    assert get(v, "token_count") == 0 and get(v, "avg_word_len") == 0


def random_text(rng):
    alphabet = "abcdefgXYZ  .,!?;:'\"0123<>%#\t-"
    words = load_function_words()[:30]
    parts = [rng.choice(words) if rng.random() < 0.3 else "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 12)))
             for _ in range(rng.randint(1, 40))]
    return " ".join(parts).strip() or "x"


def test_properties_over_random_corpus():
    rng = random.Random(0)
    texts = [random_text(rng) for _ in range(1000)]
    cfg = StyloConfig()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StyloWarning)
        M = stylometric_matrix(texts, cfg)
    assert M.values.shape == (1000, 366)
    names = cfg.space.names
    idx = {n: i for i, n in enumerate(names)}
    ratio = [i for n, i in idx.items() if n.endswith("_ratio") or n.split(":")[1].startswith(("letter_", "special_", "word_len_"))]
    assert np.all((M.values[:, ratio] >= 0) & (M.values[:, ratio] <= 1))
    letters = [idx[f"stylo:letter_{c}"] for c in "abcdefghijklmnopqrstuvwxyz"]
    assert np.all(M.values[:, letters].sum(axis=1) <= M.values[:, idx["stylo:letter_ratio"]] + 1e-12)
    buckets = [idx[f"stylo:word_len_{i}"] for i in range(1, 21)]
    has_words = M.values[:, idx["stylo:token_count"]] > 0
    np.testing.assert_allclose(M.values[has_words][:, buckets].sum(axis=1), 1.0, rtol=0, atol=1e-12)
