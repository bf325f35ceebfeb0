import random
from collections import Counter

import numpy as np
import pytest

from topicconf.corpus.model import Document
from topicconf.features import EmptyVocabularyError, extract_ngrams, fit_ngram_vocab, ngram_matrix, word_units
from topicconf.features.ngrams import normalize_whitespace


def brute_force(seq, n):
    """Sliding-window counts written independently of the library."""
    counts = {}
    for i in range(0, len(seq) - n + 1):
        gram = tuple(seq[i:i + n])
        counts[gram] = counts.get(gram, 0) + 1
    return counts


def test_abab_example():
    vocab = fit_ngram_vocab(["abab"], "char", 2)
    assert dict(vocab.grams) == {"ab": 0, "ba": 1}
    assert vocab.counts == (2, 1)
    assert extract_ngrams("abab", vocab).entries == {0: 2 / 3, 1: 1 / 3}
    assert dict(fit_ngram_vocab(["abab"], "char", 2, f_t=2).grams) == {"ab": 0}


def test_pos_bigrams():
    doc = Document("d", "a", "t", "the dog ran", ("DT", "NN", "VB"))
    vocab = fit_ngram_vocab([doc], "pos", 2)
    assert set(vocab.grams) == {"DT NN", "NN VB"}


def test_no_shared_grams_and_short_docs_give_zero_vector():
    vocab = fit_ngram_vocab(["abab"], "char", 2)
    assert extract_ngrams("xyz", vocab).entries == {}
    assert extract_ngrams("a", vocab).entries == {}


def test_empty_vocabulary_error_suggests_lower_threshold():
    with pytest.raises(EmptyVocabularyError, match="lower f_t"):
        fit_ngram_vocab(["abc"], "char", 2, f_t=5)


def test_char_grams_use_normalized_whitespace():
    vocab = fit_ngram_vocab(["a \n\t b"], "char", 3)
    assert set(vocab.grams) == {"a b"}


def test_word_units_merge_mask_runs():
    assert word_units("The **** sat, 42 ##.") == ["the", "****", "sat", "42", "##"]


def test_restrict_is_column_prefix():
    docs = ["the cat the dog the cat a", "a dog"]
    full = fit_ngram_vocab(docs, "word", 1, f_t=1)
    for f_t in (1, 2, 3):
        restricted = full.restrict(f_t)
        direct = fit_ngram_vocab(docs, "word", 1, f_t=f_t)
        assert dict(restricted.grams) == dict(direct.grams)
        assert list(full.grams)[:len(direct)] == list(direct.grams)


def random_docs(rng, level):
    if level == "char":
        return ["".join(rng.choice("ab c") for _ in range(rng.randint(0, 25))) for _ in range(5)]
    if level == "word":
        return [" ".join(rng.choice(["x", "Y", "zed", "w", "42"]) for _ in range(rng.randint(0, 15))) for _ in range(5)]
    tags = ["DT", "NN", "VB", "JJ"]
    out = []
    for i in range(5):
        k = rng.randint(0, 12)
        text = " ".join(["word"] * k) or "."
        out.append(Document(f"d{i}", "a", "t", text, tuple(rng.choice(tags) for _ in range(k))))
    return out


def unit_seq(doc, level):
    if level == "char":
        return list(" ".join(doc.split()))
    if level == "word":
        return [w.lower() for w in doc.split()]
    return list(doc.pos_tags)


@pytest.mark.parametrize("level", ["char", "word", "pos"])
def test_matches_brute_force_counter(level):
    rng = random.Random(hash(level) % 1000)
    for trial in range(100):
        docs = random_docs(rng, level)
        n = rng.randint(1, 3)
        f_t = rng.randint(1, 3)
        total = Counter()
        for d in docs:
            total.update(brute_force(unit_seq(d, level), n))
        expected_vocab = {g for g, c in total.items() if c >= f_t}
        if not expected_vocab:
            with pytest.raises(EmptyVocabularyError):
                fit_ngram_vocab(docs, level, n, f_t)
            continue
        vocab = fit_ngram_vocab(docs, level, n, f_t)
        sep = "" if level == "char" else " "
        assert set(vocab.grams) == {sep.join(g) for g in expected_vocab}
        M = ngram_matrix(docs, vocab)
        for row, d in zip(M.values, docs):
            counts = brute_force(unit_seq(d, level), n)
            denom = sum(counts.values())
            want = np.zeros(len(vocab))
            for g, c in counts.items():
                if g in expected_vocab:
                    want[vocab.grams[sep.join(g)]] = c / denom
            assert np.array_equal(row, want)


def test_values_sum_to_one_when_vocab_covers_doc():
    docs = ["hello world", "world hello"]
    vocab = fit_ngram_vocab(docs, "char", 3)
    for d in docs:
        assert sum(extract_ngrams(d, vocab).entries.values()) == pytest.approx(1.0, abs=1e-12)
    assert normalize_whitespace("  a  b ") == "a b"
