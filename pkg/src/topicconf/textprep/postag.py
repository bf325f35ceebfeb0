"""Part-of-speech tags for documents.

Two providers are available. ``precomputed`` returns tags stored on the
document (for example from an external tagger run offline). ``embedded`` is a
small deterministic tagger in the Penn Treebank tagset: a closed-class
lexicon first, then the ordered suffix rules in ``SUFFIX_RULES``, then
capitalisation and a noun fallback. It is a rough stand-in for a trained
tagger; precomputed tags should be preferred when fidelity matters.
"""

from __future__ import annotations

from typing import Literal

from topicconf.textprep.tokenize import Token, tokenize_words

Provider = Literal["embedded", "precomputed", "auto"]


class PosTagError(ValueError):
    pass


def _entries(tag: str, words: str) -> dict[str, str]:
    return {w: tag for w in words.split()}


LEXICON: dict[str, str] = {
    **_entries("DT", "the a an this that these those every each another either neither no some any all both half"),
    **_entries("PRP", "i me you he him she her it we us they them myself yourself himself herself itself ourselves themselves yourselves"),
    **_entries("PRP$", "my your his its our their"),
    **_entries("WP", "who whom what whoever"),
    **_entries("WP$", "whose"),
    **_entries("WDT", "which whatever whichever"),
    **_entries("WRB", "when where why how whenever wherever"),
    **_entries("CC", "and but or nor yet plus"),
    **_entries("IN", "of in on at by for with from into onto about above across after against along among around "
                     "before behind below beneath beside between beyond during except inside near off outside over "
                     "past since than through throughout till toward towards under unlike until upon via within "
                     "without because although though while whereas if unless whether despite per"),
    **_entries("TO", "to"),
    **_entries("MD", "will would shall should can could may might must ought"),
    **_entries("VB", "be do have"),
    **_entries("VBZ", "is has does"),
    **_entries("VBP", "am are"),
    **_entries("VBD", "was were had did said went made took came got saw knew thought told became left felt"),
    **_entries("VBN", "been done gone given taken seen known shown"),
    **_entries("VBG", "being having doing"),
    **_entries("RB", "not n't very too also just only even still already always never often sometimes soon "
                     "perhaps quite rather almost again here there now then ever instead indeed however thus "
                     "hence therefore moreover furthermore nevertheless otherwise meanwhile else ago away back "
                     "together well yes so"),
    **_entries("EX", "there's"),
    **_entries("JJ", "other same such own many few several good new old great big small large long little "
                     "high low young important public political social"),
    **_entries("JJR", "more less better worse"),
    **_entries("JJS", "most least best worst"),
    **_entries("CD", "one two three four five six seven eight nine ten hundred thousand million billion"),
    **_entries("NN", "people time year way day man woman thing world life government"),
    **_entries("UH", "oh ah hello"),
}

# (suffix, tag, minimum word length); first match wins.
SUFFIX_RULES: tuple[tuple[str, str, int], ...] = (
    ("n't", "RB", 3),
    ("'s", "POS", 3),
    ("ly", "RB", 4),
    ("ing", "VBG", 5),
    ("ed", "VBD", 4),
    ("tion", "NN", 5),
    ("sion", "NN", 5),
    ("ment", "NN", 5),
    ("ness", "NN", 5),
    ("ity", "NN", 5),
    ("ship", "NN", 5),
    ("ism", "NN", 5),
    ("ist", "NN", 5),
    ("able", "JJ", 5),
    ("ible", "JJ", 5),
    ("ous", "JJ", 5),
    ("ful", "JJ", 5),
    ("ive", "JJ", 5),
    ("ical", "JJ", 5),
    ("al", "JJ", 5),
    ("less", "JJ", 5),
    ("est", "JJS", 5),
    ("ize", "VB", 5),
    ("ise", "VB", 5),
    ("ify", "VB", 5),
    ("ss", "NN", 3),
    ("s", "NNS", 4),
)


def tag_token(token: Token, sentence_initial: bool = False) -> str:
    if token.kind == "number":
        return "CD"
    word = token.surface
    lower = word.lower().replace("’", "'")
    if lower in LEXICON:
        return LEXICON[lower]
    if word[0].isupper() and not sentence_initial:
        return "NNPS" if lower.endswith("s") and len(lower) > 3 else "NNP"
    for suffix, tag, min_len in SUFFIX_RULES:
        if len(lower) >= min_len and lower.endswith(suffix):
            return tag
    return "NN"


def embedded_tags(text: str) -> list[str]:
    tags = []
    sentence_initial = True
    for tok in tokenize_words(text):
        if tok.kind in ("word", "number"):
            tags.append(tag_token(tok, sentence_initial))
            sentence_initial = False
        elif tok.surface in ".!?":
            sentence_initial = True
    return tags


def pos_tags(doc, provider: Provider = "auto") -> list[str]:
    """POS tags for ``doc``, one per word or number token.

    ``auto`` uses the document's stored tags when present and falls back to
    the embedded tagger otherwise.
    """
    if provider == "auto":
        provider = "precomputed" if doc.pos_tags is not None else "embedded"
    if provider == "embedded":
        return embedded_tags(doc.text)
    if provider != "precomputed":
        raise ValueError(f"unknown POS provider {provider!r}")
    if doc.pos_tags is None:
        raise PosTagError(f"document {doc.id!r} has no precomputed POS tags")
    n_words = len(tokenize_words(doc.text).words())
    if len(doc.pos_tags) != n_words:
        raise PosTagError(
            f"document {doc.id!r}: {len(doc.pos_tags)} POS tags for {n_words} word tokens"
        )
    return list(doc.pos_tags)
