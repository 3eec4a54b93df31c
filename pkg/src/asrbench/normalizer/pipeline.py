"""The normalization pipeline itself.

english_full composes: strip_punct_case -> contraction expansion (then
apostrophe deletion) -> filler removal -> number canonicalization ->
spelling standardization. basic composes: strip_punct_case -> tokenize.
The stage order is fixed; fillers are removed before numbers so a filler
can never split a spoken number span.

All functions are pure; rules objects are immutable after load, so the
pipeline is safe to call from many threads at once.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass

from asrbench.normalizer.numbers import canonicalize_numbers
from asrbench.normalizer.rules import NormalizationRules, NormMode

_WS_RE = re.compile(r"\s+")
_ASCII_KEEP = frozenset("abcdefghijklmnopqrstuvwxyz0123456789'")


@dataclass(frozen=True)
class NormalizedText:
    """Canonical token sequence plus provenance of input and rules."""

    tokens: tuple[str, ...]
    source_hash: str
    rules_id: str

    def __post_init__(self) -> None:
        for tok in self.tokens:
            if not tok or _WS_RE.search(tok):
                raise ValueError(f"invalid normalized token: {tok!r}")

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


def strip_punct_case(text: str, mode: NormMode | str = NormMode.ENGLISH_FULL) -> str:
    """Lowercase, NFKC-normalize, and strip punctuation from raw text.

    english_full keeps only ASCII letters, digits, and apostrophes
    (accented letters are first reduced to their base letter); basic
    replaces Unicode punctuation with spaces but keeps letters of any
    script. Whitespace runs are collapsed either way.

    Case removal uses casefold so pairs like STRASSE/straße unify.
    """
    mode = NormMode(mode)
    # casefold can leave decomposed sequences behind; recompose so output
    # is NFKC-normal and a second pass is a no-op
    text = unicodedata.normalize("NFKC", unicodedata.normalize("NFKC", text).casefold())
    if mode is NormMode.ENGLISH_FULL:
        out = []
        for ch in unicodedata.normalize("NFKD", text):
            if ch in _ASCII_KEEP:
                out.append(ch)
            elif ch.isspace():
                out.append(" ")
            elif unicodedata.combining(ch):
                continue
            else:
                out.append(" ")
        text = "".join(out)
    else:
        text = "".join(
            " " if unicodedata.category(ch).startswith("P") else ch for ch in text
        )
    return _WS_RE.sub(" ", text).strip()


def expand_contractions(tokens: list[str], contraction_map: dict[str, str]) -> list[str]:
    """Replace each contraction token with its (possibly multi-word) expansion."""
    out: list[str] = []
    for tok in tokens:
        expansion = contraction_map.get(tok)
        if expansion is None:
            out.append(tok)
        else:
            out.extend(expansion.split())
    return out


def _delete_apostrophes(tokens: list[str]) -> list[str]:
    # Runs after contraction expansion; drops tokens that were pure apostrophes.
    out = []
    for tok in tokens:
        tok = tok.replace("'", "")
        if tok:
            out.append(tok)
    return out


def remove_fillers(tokens: list[str], rules: NormalizationRules) -> list[str]:
    """Delete filler words; matching is whole-token, order preserved."""
    return [tok for tok in tokens if tok not in rules.filler_set]


def standardize_spelling(tokens: list[str], rules: NormalizationRules) -> list[str]:
    """One-pass, non-recursive per-token spelling replacement."""
    return [rules.spelling_map.get(tok, tok) for tok in tokens]


def normalize(text: str, rules: NormalizationRules) -> NormalizedText:
    """Run the full pipeline for the rules' mode over a raw string."""
    stripped = strip_punct_case(text, rules.mode)
    tokens = stripped.split()
    if rules.mode is NormMode.ENGLISH_FULL:
        tokens = expand_contractions(tokens, rules.contraction_map)
        tokens = _delete_apostrophes(tokens)
        tokens = remove_fillers(tokens, rules)
        tokens = canonicalize_numbers(tokens)
        tokens = standardize_spelling(tokens, rules)
    source_hash = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
    return NormalizedText(tokens=tuple(tokens), source_hash=source_hash, rules_id=rules.rules_id)
