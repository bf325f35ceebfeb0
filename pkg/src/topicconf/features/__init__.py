"""Stylometric and n-gram feature extraction, block combination and scaling."""

from topicconf.features.ngrams import (
    EmptyVocabularyError,
    NgramVocab,
    extract_ngrams,
    fit_ngram_vocab,
    gram_counts,
    ngram_matrix,
    units,
    word_units,
)
from topicconf.features.space import (
    FeatureMatrix,
    FeatureSpace,
    Scaler,
    SpaceMismatchError,
    SparseVector,
    apply_scaler,
    combine,
    combine_matrices,
    fit_scaler,
    stack,
    write_catalog,
)
from topicconf.features.stylometric import (
    StyloConfig,
    StyloWarning,
    extract_stylometric,
    load_function_words,
    stylometric_matrix,
)

__all__ = [
    "EmptyVocabularyError",
    "FeatureMatrix",
    "FeatureSpace",
    "NgramVocab",
    "Scaler",
    "SpaceMismatchError",
    "SparseVector",
    "StyloConfig",
    "StyloWarning",
    "apply_scaler",
    "combine",
    "combine_matrices",
    "extract_ngrams",
    "extract_stylometric",
    "fit_ngram_vocab",
    "fit_scaler",
    "gram_counts",
    "load_function_words",
    "ngram_matrix",
    "stack",
    "stylometric_matrix",
    "units",
    "word_units",
    "write_catalog",
]
