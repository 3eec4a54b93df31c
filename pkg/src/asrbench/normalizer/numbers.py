"""Cardinal number canonicalization: English number words to digit strings.

Covers cardinals up to the billions, consuming multi-token spans such as
"one hundred twenty three" as a single number and absorbing the connective
"and" inside a span. Tokens that are not well-formed cardinals (including
bare scale words like "hundred") pass through unchanged, as do tokens
mixing digits and letters ("2nd", "4k"). Decimals, ordinals, and currency
words are out of scope.
"""

from __future__ import annotations

_UNITS = {
    "zero": 0,
    "one": 1,
    "two": 2,
    "three": 3,
    "four": 4,
    "five": 5,
    "six": 6,
    "seven": 7,
    "eight": 8,
    "nine": 9,
}

_TEENS = {
    "ten": 10,
    "eleven": 11,
    "twelve": 12,
    "thirteen": 13,
    "fourteen": 14,
    "fifteen": 15,
    "sixteen": 16,
    "seventeen": 17,
    "eighteen": 18,
    "nineteen": 19,
}

_TENS = {
    "twenty": 20,
    "thirty": 30,
    "forty": 40,
    "fifty": 50,
    "sixty": 60,
    "seventy": 70,
    "eighty": 80,
    "ninety": 90,
}

_SCALES = {
    "thousand": 1_000,
    "million": 1_000_000,
    "billion": 1_000_000_000,
}

# Only these words can open a number span; "hundred"/"thousand"/"and" need
# a preceding multiplier to be numeric.
_SPAN_STARTERS = frozenset(_UNITS) | frozenset(_TEENS) | frozenset(_TENS)

NUMBER_WORDS = _SPAN_STARTERS | frozenset(_SCALES) | {"hundred", "and"}


def _parse_small(tokens: list[str], i: int) -> tuple[int, int] | None:
    """Parse a 1..99 value at position i; returns (value, next_index)."""
    tok = tokens[i]
    if tok in _TEENS:
        return _TEENS[tok], i + 1
    if tok in _TENS:
        value = _TENS[tok]
        j = i + 1
        if j < len(tokens) and tokens[j] in _UNITS and _UNITS[tokens[j]] != 0:
            return value + _UNITS[tokens[j]], j + 1
        return value, j
    if tok in _UNITS and _UNITS[tok] != 0:
        return _UNITS[tok], i + 1
    return None


def _parse_chunk(tokens: list[str], i: int) -> tuple[int, int] | None:
    """Parse a small value optionally scaled by "hundred" with a tail.

    Handles "five", "twenty three", "one hundred", "one hundred and five",
    and spoken forms like "nineteen hundred".
    """
    got = _parse_small(tokens, i)
    if got is None:
        return None
    value, j = got
    if j < len(tokens) and tokens[j] == "hundred":
        value *= 100
        j += 1
        k = j
        if k < len(tokens) and tokens[k] == "and":
            k += 1
        tail = _parse_small(tokens, k) if k < len(tokens) else None
        if tail is not None:
            value += tail[0]
            j = tail[1]
    return value, j


def _parse_span(tokens: list[str], i: int) -> tuple[int, int] | None:
    """Consume the longest well-formed cardinal starting at position i.

    A span is a sequence of chunks, each optionally followed by a scale
    word; scales must strictly descend, and at most one trailing unscaled
    chunk (smaller than the last scale) is allowed. "and" is absorbed only
    when a legal continuation follows it.
    """
    if tokens[i] == "zero":
        return 0, i + 1
    total = 0
    j = i
    scale_floor: int | None = None
    progressed = False
    while j < len(tokens):
        k = j
        if progressed and tokens[k] == "and":
            k += 1
            if k >= len(tokens):
                break
        got = _parse_chunk(tokens, k)
        if got is None:
            break
        value, after = got
        if after < len(tokens) and tokens[after] in _SCALES:
            scale = _SCALES[tokens[after]]
            if scale_floor is None or scale < scale_floor:
                total += value * scale
                scale_floor = scale
                j = after + 1
                progressed = True
                continue
        if scale_floor is not None and value >= scale_floor:
            break
        total += value
        j = after
        progressed = True
        break
    if not progressed:
        return None
    return total, j


def canonicalize_numbers(tokens: list[str]) -> list[str]:
    """Rewrite every cardinal (word spans or digit strings) to digits.

    Digit-string tokens are reduced to their canonical form ("007" becomes
    "7"); everything unparseable passes through unchanged.
    """
    out: list[str] = []
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok.isascii() and tok.isdigit():
            out.append(str(int(tok)))
            i += 1
            continue
        if tok in _SPAN_STARTERS:
            got = _parse_span(tokens, i)
            if got is not None:
                value, end = got
                out.append(str(value))
                i = end
                continue
        out.append(tok)
        i += 1
    return out
