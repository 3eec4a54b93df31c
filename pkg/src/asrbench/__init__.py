"""ASR evaluation harness.

Standardized text normalization, WER and RTFx scoring across short-form,
multilingual, and long-form tracks, pluggable transcription backends, and
ranked leaderboard reports.
"""

__version__ = "0.1.0"

from asrbench.corpus import DatasetManifest, Sample, Track, is_longform, load_manifest, select
from asrbench.metrics import EditCounts, RtfxMeasurement, WerScore, align, corpus_wer, rtfx
from asrbench.normalizer import NormMode, NormalizationRules, load_rules, normalize

__all__ = [
    "DatasetManifest",
    "EditCounts",
    "NormMode",
    "NormalizationRules",
    "RtfxMeasurement",
    "Sample",
    "Track",
    "WerScore",
    "align",
    "corpus_wer",
    "is_longform",
    "load_manifest",
    "load_rules",
    "normalize",
    "rtfx",
    "select",
]
