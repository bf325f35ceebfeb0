"""Word tokenization and sentence splitting."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Iterator, Literal

TokenKind = Literal["word", "punctuation", "number", "symbol"]

_LETTERS = r"[^\W\d_]"
_TOKEN_RE = re.compile(
    rf"(?P<word>{_LETTERS}+(?:['’]{_LETTERS}+)*)"
    r"|(?P<number>\d+(?:[.,\-]\d+)*)"
    r"|(?P<other>\S)"
)
_SENTENCE_END_RE = re.compile(r"[.!?](?=\s|$)")


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind
    start: int
    end: int


@dataclass(frozen=True)
class TokenStream:
    """Tokens of a source text, each carrying its character span."""

    text: str
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def surfaces(self, *kinds: TokenKind) -> list[str]:
        if not kinds:
            return [t.surface for t in self.tokens]
        return [t.surface for t in self.tokens if t.kind in kinds]

    def words(self) -> list[Token]:
        """Word and number tokens, the units that carry POS tags."""
        return [t for t in self.tokens if t.kind in ("word", "number")]


def _classify_other(ch: str) -> TokenKind:
    return "punctuation" if unicodedata.category(ch).startswith("P") else "symbol"


def tokenize_words(text: str) -> TokenStream:
    """Split ``text`` into word, number, punctuation and symbol tokens.

    Words are maximal letter runs, optionally joined by internal apostrophes
    (``don't``). Numbers are digit runs that may contain internal ``.``, ``,``
    or ``-`` (``555-1234``, ``3.14``). Any other non-space character is a
    single-character token.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        surface = m.group()
        if kind == "other":
            kind = _classify_other(surface)
        tokens.append(Token(surface, kind, m.start(), m.end()))
    return TokenStream(text, tuple(tokens))


def word_tokens(text: str) -> list[str]:
    """Surfaces of word and number tokens."""
    return [t.surface for t in tokenize_words(text).words()]


def split_sentences(text: str) -> list[tuple[int, int]]:
    """Return ``(start, end)`` spans of sentences in ``text``.

    A sentence ends at ``.``, ``!`` or ``?`` followed by whitespace or the end
    of the text; a trailing unterminated fragment is a sentence too. Spans
    exclude surrounding whitespace. Abbreviations such as "Dr." are split on,
    which is a known limitation.
    """
    spans = []
    pos = 0
    for m in _SENTENCE_END_RE.finditer(text):
        span = _strip_span(text, pos, m.end())
        if span is not None:
            spans.append(span)
        pos = m.end()
    tail = _strip_span(text, pos, len(text))
    if tail is not None:
        spans.append(tail)
    return spans


def _strip_span(text: str, start: int, end: int) -> tuple[int, int] | None:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    if start == end:
        return None
    return start, end
