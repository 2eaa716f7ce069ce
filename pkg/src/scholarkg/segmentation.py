"""Rule-based sentence segmentation for scholarly prose."""

from __future__ import annotations

import re

__all__ = ["segment_sentences", "ABBREVIATIONS"]

# Tokens that end with a period without ending a sentence. Compared
# case-insensitively against the text immediately before a terminator.
ABBREVIATIONS = (
    "et al.",
    "fig.",
    "figs.",
    "eq.",
    "eqs.",
    "tab.",
    "sec.",
    "no.",
    "vol.",
    "e.g.",
    "i.e.",
    "etc.",
    "cf.",
    "vs.",
    "resp.",
    "approx.",
    "dr.",
    "prof.",
    "mr.",
    "ms.",
)

_TERMINATOR = re.compile(r"[.!?]+[\"')\]}”’]*")
_OPENERS = "\"'([{“‘"


def _is_abbreviation(prefix: str) -> bool:
    low = prefix.lower()
    for abbr in ABBREVIATIONS:
        if low.endswith(abbr):
            return True
    # Single-letter initials such as "J." never end a sentence.
    if re.search(r"(^|\s)[A-Za-z]\.$", prefix):
        return True
    return False


def _starts_new_sentence(rest: str) -> bool:
    rest = rest.lstrip(_OPENERS)
    return bool(rest) and (rest[0].isupper() or rest[0].isdigit())


def segment_sentences(text: str) -> list[str]:
    """Split plain text into sentences.

    A sentence boundary is a run of ``.``, ``!`` or ``?`` followed by
    whitespace and an uppercase letter or digit, unless the terminator
    belongs to a known abbreviation or a decimal number. The returned
    sentences are trimmed; concatenating them preserves every
    non-whitespace character of the input.
    """
    boundaries: list[int] = []
    for match in _TERMINATOR.finditer(text):
        end = match.end()
        if end >= len(text) or not text[end].isspace():
            continue  # mid-token period, e.g. a decimal number or URL
        after = text[end:].lstrip()
        if not _starts_new_sentence(after):
            continue
        prefix = text[:end].rstrip("\"')]}”’")
        if _is_abbreviation(prefix):
            continue
        boundaries.append(end)

    sentences: list[str] = []
    start = 0
    for end in boundaries:
        chunk = text[start:end].strip()
        if chunk:
            sentences.append(" ".join(chunk.split()))
        start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(" ".join(tail.split()))
    return sentences
