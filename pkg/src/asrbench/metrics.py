"""Word-level edit-distance alignment, corpus WER, and RTFx.

Alignment uses uniform costs (substitution, deletion, insertion all cost
one). Among minimum-cost alignments the substitution-heaviest one is
selected, which makes the per-category counts deterministic and symmetric
under swapping reference and hypothesis (deletions and insertions trade
places, substitutions are unchanged).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class EditCounts:
    """Substitution/deletion/insertion tallies against a reference."""

    substitutions: int
    deletions: int
    insertions: int
    ref_len: int

    def __post_init__(self) -> None:
        if min(self.substitutions, self.deletions, self.insertions, self.ref_len) < 0:
            raise ValueError("edit counts must be non-negative")
        if self.deletions > self.ref_len:
            raise ValueError("deletions cannot exceed reference length")
        if self.substitutions + self.deletions > self.ref_len:
            raise ValueError("substitutions + deletions cannot exceed reference length")

    @property
    def total_edits(self) -> int:
        return self.substitutions + self.deletions + self.insertions


@dataclass(frozen=True)
class WerScore:
    """Pooled word error rate: total edits over total reference tokens."""

    value: float
    numerator: int
    denominator: int


@dataclass(frozen=True)
class RtfxMeasurement:
    """Inverse real-time factor: audio seconds per wall-clock second."""

    audio_seconds: float
    transcription_seconds: float
    rtfx: float


def align(ref_tokens: Sequence[str], hyp_tokens: Sequence[str]) -> EditCounts:
    """Minimum-edit alignment counts between reference and hypothesis tokens.

    substitutions + deletions + insertions equals the Levenshtein distance.
    """
    n, m = len(ref_tokens), len(hyp_tokens)
    # Per cell: (cost, subs) for the min-cost, then max-substitution prefix
    # alignment. Both components are additive, so the lexicographic optimum
    # satisfies the usual DP recurrence.
    prev: list[tuple[int, int]] = [(j, 0) for j in range(m + 1)]
    for i in range(1, n + 1):
        cur: list[tuple[int, int]] = [(i, 0)] * (m + 1)
        r = ref_tokens[i - 1]
        for j in range(1, m + 1):
            pc, ps = prev[j - 1]
            if r == hyp_tokens[j - 1]:
                best_cost, best_subs = pc, ps
            else:
                best_cost, best_subs = pc + 1, ps + 1
            dc, ds = prev[j]
            if dc + 1 < best_cost or (dc + 1 == best_cost and ds > best_subs):
                best_cost, best_subs = dc + 1, ds
            ic, isubs = cur[j - 1]
            if ic + 1 < best_cost or (ic + 1 == best_cost and isubs > best_subs):
                best_cost, best_subs = ic + 1, isubs
            cur[j] = (best_cost, best_subs)
        prev = cur
    cost, subs = prev[m]
    # With S fixed, D and I follow from cost = S+D+I and D-I = n-m.
    deletions = (cost - subs + (n - m)) // 2
    insertions = cost - subs - deletions
    return EditCounts(substitutions=subs, deletions=deletions, insertions=insertions, ref_len=n)


def corpus_wer(counts: Iterable[EditCounts]) -> WerScore:
    """Micro-averaged WER: pooled edits over pooled reference length.

    Order-independent; raises if the pool has no reference tokens.
    """
    numerator = 0
    denominator = 0
    for c in counts:
        numerator += c.total_edits
        denominator += c.ref_len
    if denominator == 0:
        raise ValueError("undefined WER: zero reference tokens")
    return WerScore(value=numerator / denominator, numerator=numerator, denominator=denominator)


def rtfx(audio_seconds: float, transcription_seconds: float) -> RtfxMeasurement:
    """Inverse real-time factor; higher is better."""
    if audio_seconds <= 0 or transcription_seconds <= 0:
        raise ValueError(
            f"invalid duration: audio_seconds={audio_seconds}, "
            f"transcription_seconds={transcription_seconds}"
        )
    return RtfxMeasurement(
        audio_seconds=audio_seconds,
        transcription_seconds=transcription_seconds,
        rtfx=audio_seconds / transcription_seconds,
    )
