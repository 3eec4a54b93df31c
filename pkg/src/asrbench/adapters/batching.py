"""Adaptive batch sizing and adapter warmup.

Batches start at the configured size and, on a capacity error, permanently
step down one ladder rung; the failed batch is resubmitted split at the
new size. Capacity at rung 1 is fatal (the sample cannot fit at all). Only
capacity errors are retried; anything else aborts with whatever responses
were already collected, so callers can persist a partial result.
"""

from __future__ import annotations

import time
import wave
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Callable, Sequence

from asrbench.adapters.base import (
    AdapterConfig,
    AdapterError,
    CapacityError,
    TranscriptionAdapter,
    TranscriptionRequest,
    TranscriptionResponse,
    match_responses,
)


@dataclass(frozen=True)
class BatchAttempt:
    """One adapter invocation: requested rung, actual size, outcome."""

    rung: int
    size: int
    sample_ids: tuple[str, ...]
    elapsed_s: float
    ok: bool


@dataclass
class BatchOutcome:
    responses: dict[str, TranscriptionResponse] = field(default_factory=dict)
    attempts: list[BatchAttempt] = field(default_factory=list)
    final_rung: int = 0

    @property
    def call_seconds(self) -> float:
        """Wall time spent inside adapter calls, failed probes included."""
        return sum(a.elapsed_s for a in self.attempts)


class BatchAbort(AdapterError):
    """Non-retryable failure mid-run; carries everything collected so far."""

    def __init__(self, message: str, outcome: BatchOutcome, cause: Exception | None = None):
        super().__init__(message)
        self.outcome = outcome
        self.cause = cause


def with_adaptive_batching(
    adapter: TranscriptionAdapter,
    requests: Sequence[TranscriptionRequest],
    config: AdapterConfig,
    clock: Callable[[], float] = time.perf_counter,
) -> BatchOutcome:
    """Transcribe every request exactly once, shrinking batches on demand.

    The active rung never increases during a run, so a backend that cannot
    hold large batches is probed at most once per oversized rung.
    """
    ids = [r.sample_id for r in requests]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate sample ids in batch input")

    ladder = config.backoff_ladder
    rung_index = ladder.index(config.initial_batch_size)
    pending = deque(requests)
    outcome = BatchOutcome(final_rung=ladder[rung_index])

    while pending:
        rung = ladder[rung_index]
        batch = [pending.popleft() for _ in range(min(rung, len(pending)))]
        batch_ids = tuple(r.sample_id for r in batch)
        start = clock()
        try:
            raw = adapter.transcribe_batch(batch)
            matched = match_responses(batch, raw)
        except CapacityError as exc:
            elapsed = clock() - start
            outcome.attempts.append(BatchAttempt(rung, len(batch), batch_ids, elapsed, ok=False))
            pending.extendleft(reversed(batch))
            if rung_index == len(ladder) - 1:
                raise BatchAbort(
                    f"sample does not fit: capacity error at batch size 1 "
                    f"(sample {batch_ids[0]!r})",
                    outcome,
                    exc,
                ) from exc
            rung_index += 1
            outcome.final_rung = ladder[rung_index]
            continue
        except AdapterError as exc:
            elapsed = clock() - start
            outcome.attempts.append(BatchAttempt(rung, len(batch), batch_ids, elapsed, ok=False))
            raise BatchAbort(f"adapter failed mid-run: {exc}", outcome, exc) from exc
        elapsed = clock() - start
        outcome.responses.update(matched)
        outcome.attempts.append(BatchAttempt(rung, len(batch), batch_ids, elapsed, ok=True))

    return outcome


def _write_silence_wav(path: Path, seconds: float = 1.0, rate: int = 16000) -> None:
    with wave.open(str(path), "wb") as handle:
        handle.setnchannels(1)
        handle.setsampwidth(2)
        handle.setframerate(rate)
        handle.writeframes(b"\x00\x00" * int(rate * seconds))


def warmup(adapter: TranscriptionAdapter) -> float:
    """One throwaway transcription of 1 s of silence.

    Forces lazy startup (model load, subprocess handshake) outside the
    timed evaluation; returns the elapsed seconds, result discarded.
    """
    with TemporaryDirectory(prefix="asrbench-warmup-") as tmp:
        wav = Path(tmp) / "silence.wav"
        _write_silence_wav(wav)
        request = TranscriptionRequest(sample_id="__warmup__", audio_path=str(wav))
        start = time.perf_counter()
        adapter.transcribe_batch([request])
        return time.perf_counter() - start
