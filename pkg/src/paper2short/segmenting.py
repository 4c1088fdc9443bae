"""Deterministic sentence-boundary segmentation.

This is the provider-free fallback for turning an edited script into
scene beats: paragraphs are hard boundaries, sentences inside a
paragraph are packed greedily up to the 22-word beat target, and any
sentence over 30 words is split at the clause comma nearest the target
(or hard-cut when it has no commas). Concatenating the segments always
reproduces the input modulo whitespace.
"""
from __future__ import annotations

from .textutil import normalize_ws, split_sentences, word_count

TARGET_WORDS = 22
MAX_SEGMENT_WORDS = 30


def _split_long_sentence(tokens: list[str]) -> list[list[str]]:
    """Split a >30-word sentence into <=30-word runs, preferring commas."""
    if len(tokens) <= MAX_SEGMENT_WORDS:
        return [tokens]
    comma_positions = [i + 1 for i, tok in enumerate(tokens[:-1]) if tok.endswith(",")]
    candidates = [p for p in comma_positions if 1 <= p <= MAX_SEGMENT_WORDS]
    if candidates:
        cut = min(candidates, key=lambda p: abs(p - TARGET_WORDS))
    else:
        cut = TARGET_WORDS
    return [tokens[:cut]] + _split_long_sentence(tokens[cut:])


def segment_text(text: str) -> list[str]:
    """Segment edited script text into beat-sized chunks."""
    segments: list[str] = []
    for paragraph in text.splitlines():
        if not paragraph.strip():
            continue
        if word_count(paragraph) <= MAX_SEGMENT_WORDS:
            segments.append(normalize_ws(paragraph))
            continue
        pieces: list[list[str]] = []
        for sentence in split_sentences(paragraph):
            pieces.extend(_split_long_sentence(sentence.split()))
        current: list[str] = []
        for piece in pieces:
            if current and len(current) + len(piece) > TARGET_WORDS:
                segments.append(" ".join(current))
                current = []
            if len(piece) > TARGET_WORDS:
                segments.append(" ".join(piece))
            else:
                current.extend(piece)
        if current:
            segments.append(" ".join(current))
    return segments


def preserves_text(original: str, segments: list[str]) -> bool:
    return normalize_ws(" ".join(segments)) == normalize_ws(original)
