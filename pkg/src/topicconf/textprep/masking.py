"""Frequency wordlists and the length-preserving masking distortion."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Literal

from topicconf.textprep.tokenize import tokenize_words

MASK_CHAR = "*"
DIGIT_CHAR = "#"


@dataclass(frozen=True)
class FrequencyList:
    """Lowercase tokens ranked from 1 (most frequent)."""

    entries: tuple[str, ...]
    lookup: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lookup = {}
        for tok in self.entries:
            if tok in lookup:
                raise ValueError(f"duplicate token {tok!r} in frequency list")
            lookup[tok] = len(lookup) + 1
        object.__setattr__(self, "lookup", lookup)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "FrequencyList":
        """Build from tokens in descending frequency; later case-variants are dropped."""
        seen = dict.fromkeys(t.lower() for t in tokens)
        return cls(tuple(seen))

    def __len__(self) -> int:
        return len(self.entries)

    def rank(self, token: str) -> int | None:
        return self.lookup.get(token.lower())


def load_frequency_list(path: str | Path) -> FrequencyList:
    """Read a wordlist with one token per line, most frequent first.

    Anything after a tab (typically a count) is ignored, as are blank lines.
    """
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tok = line.rstrip("\n").split("\t", 1)[0].strip()
            if tok:
                tokens.append(tok)
    if not tokens:
        raise ValueError(f"frequency list {path} is empty")
    return FrequencyList.from_tokens(tokens)


def derive_frequency_list(texts: Iterable[str]) -> FrequencyList:
    """Rank the word tokens of ``texts`` by frequency (ties alphabetical)."""
    counts = Counter()
    for text in texts:
        counts.update(t.surface.lower() for t in tokenize_words(text) if t.kind == "word")
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return FrequencyList(tuple(tok for tok, _ in ordered))


def save_frequency_list(freqlist: FrequencyList, path: str | Path) -> None:
    Path(path).write_text("".join(f"{t}\n" for t in freqlist.entries), encoding="utf-8")


@dataclass(frozen=True)
class MaskingRule:
    """Keep the ``k`` top-ranked words; ``level`` picks the downstream n-gram unit."""

    k: int
    freqlist: FrequencyList
    level: Literal["char", "word"] = "char"

    def __post_init__(self):
        if not 1 <= self.k <= len(self.freqlist):
            raise ValueError(
                f"masking threshold k={self.k} outside 1..{len(self.freqlist)}"
            )
        if self.level not in ("char", "word"):
            raise ValueError(f"unknown masking level {self.level!r}")


def mask_text(text: str, rule: MaskingRule) -> str:
    """Mask infrequent words with ``*`` and every digit with ``#``.

    Word tokens ranked within the top ``rule.k`` (case-insensitively) are
    kept with their original case; all other word tokens have each character
    replaced by ``*``. Digits become ``#`` everywhere. Punctuation, symbols
    and whitespace are untouched, so the output has the same length as the
    input.
    """
    chars = list(text)
    lookup, k = rule.freqlist.lookup, rule.k
    for tok in tokenize_words(text):
        if tok.kind != "word":
            continue
        rank = lookup.get(tok.surface.lower())
        if rank is None or rank > k:
            chars[tok.start:tok.end] = MASK_CHAR * (tok.end - tok.start)
    return "".join(DIGIT_CHAR if c.isdecimal() else c for c in chars)
