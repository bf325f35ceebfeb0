"""Hand-engineered stylometric features.

The vector has three blocks, in this order:

* character level: character count N; ratios of digits, letters, uppercase
  letters and tabs to N; case-insensitive frequency of each letter a-z and
  of each special character, both relative to N;
* word level: token count T (word and number tokens); mean sentence length
  in characters; mean word length; ratio of letters to N; ratio of short
  words (3 characters or fewer); ratio of words of each length 1..20
  (longer words fall in the last bucket); type-token ratio;
* syntactic: frequency of each punctuation mark and each function word,
  both relative to T.

With the default configuration that is 55 + 26 + 8 + 277 = 366 features.
"""

from __future__ import annotations

import string
import warnings
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np

from topicconf.features.space import FeatureMatrix, FeatureSpace, SparseVector, prefixed
from topicconf.textprep.tokenize import split_sentences, tokenize_words

BLOCK = "stylo"
SPECIAL_CHARS = tuple("<>%|{}[]/\\@#~+-*=$^&_()'")
PUNCTUATION = tuple(",.?!:;'\"")
WORD_LENGTH_BUCKETS = 20
SHORT_WORD_MAX = 3


class StyloWarning(UserWarning):
    pass


def load_function_words(path=None) -> tuple[str, ...]:
    if path is None:
        text = resources.files("topicconf.features").joinpath("data/function_words.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = [w.strip().lower() for w in text.splitlines()]
    return tuple(dict.fromkeys(w for w in words if w))


@dataclass(frozen=True)
class StyloConfig:
    function_words: tuple[str, ...] = field(default_factory=load_function_words)
    special_chars: tuple[str, ...] = SPECIAL_CHARS
    alphabet: tuple[str, ...] = tuple(string.ascii_lowercase)
    punctuation: tuple[str, ...] = PUNCTUATION
    word_length_buckets: int = WORD_LENGTH_BUCKETS

    def __post_init__(self):
        if len(set(self.special_chars)) != 24:
            raise ValueError("special_chars must hold 24 distinct characters")
        if len(set(self.punctuation)) != 8:
            raise ValueError("punctuation must hold 8 distinct characters")
        if self.word_length_buckets != 20:
            raise ValueError("word_length_buckets must be 20")

    def feature_names(self) -> tuple[str, ...]:
        names = ["char_count", "digit_ratio", "letter_ratio", "upper_ratio", "tab_ratio"]
        names += [f"letter_{c}" for c in self.alphabet]
        names += [f"special_{c}" for c in self.special_chars]
        names += ["token_count", "avg_sentence_len", "avg_word_len", "alpha_ratio", "short_word_ratio"]
        names += [f"word_len_{i}" for i in range(1, self.word_length_buckets + 1)]
        names += ["type_token_ratio"]
        names += [f"punct_{c}" for c in self.punctuation]
        names += [f"fw_{w}" for w in self.function_words]
        return prefixed(BLOCK, names)

    @property
    def space(self) -> FeatureSpace:
        return _space_for(self)


_SPACES: dict[StyloConfig, FeatureSpace] = {}


def _space_for(config: StyloConfig) -> FeatureSpace:
    space = _SPACES.get(config)
    if space is None:
        space = _SPACES[config] = FeatureSpace(config.feature_names())
    return space


def stylometric_values(text: str, config: StyloConfig) -> list[float]:
    if not text:
        raise ValueError("cannot extract stylometric features from empty text")
    n_chars = len(text)
    chars = Counter(text)
    n_digits = sum(c for ch, c in chars.items() if ch.isdecimal())
    n_letters = sum(c for ch, c in chars.items() if ch.isalpha())
    n_upper = sum(c for ch, c in chars.items() if ch.isupper())
    lower_chars = Counter(text.lower()) if n_upper else chars

    values = [float(n_chars), n_digits / n_chars, n_letters / n_chars, n_upper / n_chars,
              chars["\t"] / n_chars]
    values += [lower_chars[c] / n_chars for c in config.alphabet]
    values += [chars[c] / n_chars for c in config.special_chars]

    words = [t.surface for t in tokenize_words(text).words()]
    n_tokens = len(words)
    sentences = split_sentences(text)
    avg_sentence = sum(e - s for s, e in sentences) / len(sentences) if sentences else 0.0
    buckets = config.word_length_buckets
    if n_tokens:
        lengths = [len(w) for w in words]
        by_len = Counter(min(n, buckets) for n in lengths)
        lowered = [w.lower() for w in words]
        word_counts = Counter(lowered)
        values += [
            float(n_tokens),
            avg_sentence,
            sum(lengths) / n_tokens,
            n_letters / n_chars,
            sum(n <= SHORT_WORD_MAX for n in lengths) / n_tokens,
        ]
        values += [by_len[i] / n_tokens for i in range(1, buckets + 1)]
        values += [len(word_counts) / n_tokens]
        values += [chars[c] / n_tokens for c in config.punctuation]
        values += [word_counts[w] / n_tokens for w in config.function_words]
    else:
        warnings.warn("text has no word tokens; word-level features set to 0", StyloWarning, stacklevel=3)
        values += [0.0, avg_sentence, 0.0, n_letters / n_chars, 0.0]
        values += [0.0] * (buckets + 1)
        values += [0.0] * (len(config.punctuation) + len(config.function_words))
    return values


def extract_stylometric(doc, config: StyloConfig | None = None) -> SparseVector:
    """Stylometric vector of a document (anything with a ``text`` attribute)."""
    config = config or default_config()
    return SparseVector.from_dense(config.space, stylometric_values(doc.text, config))


def stylometric_matrix(texts: Sequence[str], config: StyloConfig | None = None) -> FeatureMatrix:
    config = config or default_config()
    values = np.array([stylometric_values(t, config) for t in texts], dtype=float)
    return FeatureMatrix(config.space, values.reshape(len(texts), len(config.space)))


_DEFAULT: list[StyloConfig] = []


def default_config() -> StyloConfig:
    if not _DEFAULT:
        _DEFAULT.append(StyloConfig())
    return _DEFAULT[0]
