"""Independent oracles used to cross-check the package.

Everything here restates its tables and recurrences from scratch rather
than importing from asrbench, so a bug in the implementation cannot hide
in its own test.
"""

from __future__ import annotations

import unicodedata
from functools import lru_cache
from typing import Sequence


def brute_force_edit_distance(ref: Sequence[str], hyp: Sequence[str]) -> int:
    """Levenshtein distance by direct recursion over all alignments."""

    ref = tuple(ref)
    hyp = tuple(hyp)

    @lru_cache(maxsize=None)
    def dist(i: int, j: int) -> int:
        if i == len(ref):
            return len(hyp) - j
        if j == len(hyp):
            return len(ref) - i
        if ref[i] == hyp[j]:
            return dist(i + 1, j + 1)
        return 1 + min(
            dist(i + 1, j + 1),  # substitute
            dist(i + 1, j),  # delete from reference
            dist(i, j + 1),  # insert from hypothesis
        )

    try:
        return dist(0, 0)
    finally:
        dist.cache_clear()


_ONES = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
]
_TENS = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
    "eighty", "ninety",
]
_SCALES = [(1_000_000_000, "billion"), (1_000_000, "million"), (1_000, "thousand")]


def _chunk_to_words(n: int) -> list[str]:
    # n in 1..999
    words: list[str] = []
    if n >= 100:
        words.append(_ONES[n // 100])
        words.append("hundred")
        n %= 100
    if n >= 20:
        words.append(_TENS[n // 10])
        n %= 10
        if n:
            words.append(_ONES[n])
    elif n:
        words.append(_ONES[n])
    return words


def int_to_words(n: int, with_and: bool = False) -> str:
    """Render a non-negative integer as English cardinal words.

    With with_and=True an "and" is inserted before a final sub-hundred part
    ("one hundred and five" style).
    """
    if n < 0:
        raise ValueError("cardinals only")
    if n == 0:
        return "zero"
    words: list[str] = []
    for scale_value, scale_name in _SCALES:
        if n >= scale_value:
            words.extend(_chunk_to_words(n // scale_value))
            words.append(scale_name)
            n %= scale_value
    if n:
        if with_and and words and n < 100:
            words.append("and")
        elif with_and and n >= 100 and n % 100:
            # "and" goes inside the final chunk: "three hundred and five"
            chunk = _chunk_to_words(n)
            words.extend(chunk[:2] + ["and"] + chunk[2:])
            return " ".join(words)
        words.extend(_chunk_to_words(n))
    return " ".join(words)


def strip_punct_basic_oracle(text: str) -> str:
    """Reference behavior for basic-mode stripping, from first principles:
    NFKC, casefold, Unicode punctuation categories to spaces, collapse."""
    text = unicodedata.normalize("NFKC", unicodedata.normalize("NFKC", text).casefold())
    chars = [" " if unicodedata.category(ch)[0] == "P" else ch for ch in text]
    return " ".join("".join(chars).split())
