"""Tokenization, sentence splitting, POS tags and masking."""

from topicconf.textprep.masking import (
    FrequencyList,
    MaskingRule,
    derive_frequency_list,
    load_frequency_list,
    mask_text,
    save_frequency_list,
)
from topicconf.textprep.postag import PosTagError, embedded_tags, pos_tags
from topicconf.textprep.tokenize import (
    Token,
    TokenStream,
    split_sentences,
    tokenize_words,
    word_tokens,
)

__all__ = [
    "FrequencyList",
    "MaskingRule",
    "PosTagError",
    "Token",
    "TokenStream",
    "derive_frequency_list",
    "embedded_tags",
    "load_frequency_list",
    "mask_text",
    "pos_tags",
    "save_frequency_list",
    "split_sentences",
    "tokenize_words",
    "word_tokens",
]
