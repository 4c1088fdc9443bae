"""Small text helpers shared by the narrative stages.

Word counting rule (pinned): a word is one maximal run of non-whitespace
characters, so hyphenated compounds count once.
"""
from __future__ import annotations

import re

_SENTENCE_END = re.compile(r"[.!?]['\")\]]*$")
_CITATION = re.compile(r"\[\d+(?:\s*,\s*\d+)*\]|\(\w+(?:\s+et\s+al\.?)?,?\s+\d{4}\)")


def words(text: str) -> list[str]:
    return text.split()


def word_count(text: str) -> int:
    return len(text.split())


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return " ".join(text.split())


def split_sentences(text: str) -> list[str]:
    """Token-level sentence split that never drops characters.

    A sentence boundary sits after any word ending in ., ! or ?
    (optionally followed by closing quotes/brackets). Text without a
    terminator comes back as a single sentence.
    """
    toks = text.split()
    out: list[str] = []
    cur: list[str] = []
    for tok in toks:
        cur.append(tok)
        if _SENTENCE_END.search(tok):
            out.append(" ".join(cur))
            cur = []
    if cur:
        out.append(" ".join(cur))
    return out


def has_citation_marker(text: str) -> bool:
    return bool(_CITATION.search(text))


def dehyphenate(text: str) -> str:
    """Join words broken across line ends ("exam-\nple" -> "example")."""
    return re.sub(r"(\w)-\n(\w)", r"\1\2", text)


def content_words(text: str, limit: int | None = None) -> list[str]:
    """Lower-cased alphanumeric words with stop words removed."""
    stop = {
        "the", "a", "an", "of", "to", "in", "and", "or", "is", "are", "was",
        "were", "that", "this", "it", "for", "on", "with", "as", "by", "we",
        "our", "be", "can", "at", "from", "their", "they", "you", "your",
    }
    out = []
    for tok in re.findall(r"[A-Za-z0-9']+", text.lower()):
        if tok not in stop and len(tok) > 2:
            out.append(tok)
            if limit is not None and len(out) >= limit:
                break
    return out
