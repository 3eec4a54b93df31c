"""Text normalization applied to references and hypotheses before scoring.

Two pipelines are provided: a full English pipeline (punctuation/case
stripping, contraction expansion, filler removal, number canonicalization,
spelling standardization) and a basic pipeline for other languages
(punctuation/case stripping only).
"""

from asrbench.normalizer.numbers import canonicalize_numbers
from asrbench.normalizer.pipeline import (
    NormalizedText,
    normalize,
    remove_fillers,
    standardize_spelling,
    strip_punct_case,
)
from asrbench.normalizer.rules import NormalizationRules, NormMode, load_rules

__all__ = [
    "NormMode",
    "NormalizationRules",
    "NormalizedText",
    "canonicalize_numbers",
    "load_rules",
    "normalize",
    "remove_fillers",
    "standardize_spelling",
    "strip_punct_case",
]
