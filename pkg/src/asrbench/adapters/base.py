"""Adapter contract: request/response types, configuration, error classes."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

DEFAULT_BACKOFF_LADDER = (64, 48, 32, 16, 8, 4, 2, 1)

ADAPTER_KINDS = ("mock", "subprocess", "http")


class AdapterError(Exception):
    """Base class for transcription backend failures."""


class CapacityError(AdapterError):
    """Batch too large for the backend; the only retryable failure."""


class TransportError(AdapterError):
    """Backend unreachable, crashed, or reported a fatal error."""


class ProtocolError(AdapterError):
    """Backend reply violates the wire contract (missing/extra ids, bad JSON)."""


class AdapterTimeoutError(AdapterError):
    """Backend did not answer within the configured timeout."""


@dataclass(frozen=True)
class TranscriptionRequest:
    sample_id: str
    audio_path: str
    language_hint: str | None = None

    def __post_init__(self) -> None:
        if not self.sample_id:
            raise ValueError("sample_id must be non-empty")
        if not self.audio_path:
            raise ValueError("audio_path must be non-empty")


@dataclass(frozen=True)
class TranscriptionResponse:
    sample_id: str
    hypothesis: str
    backend_infer_ms: float | None = None


@dataclass(frozen=True)
class AdapterConfig:
    """How to reach a backend and how aggressively to batch against it."""

    kind: str
    endpoint_or_cmd: str
    initial_batch_size: int = 64
    backoff_ladder: tuple[int, ...] = DEFAULT_BACKOFF_LADDER
    timeout_s: float = 60.0

    def __post_init__(self) -> None:
        if self.kind not in ADAPTER_KINDS:
            raise ValueError(f"unknown adapter kind {self.kind!r} (valid: {ADAPTER_KINDS})")
        ladder = self.backoff_ladder
        if not ladder or ladder[-1] != 1:
            raise ValueError("backoff ladder must end at 1")
        if any(a <= b for a, b in zip(ladder, ladder[1:])):
            raise ValueError("backoff ladder must be strictly descending")
        if self.initial_batch_size not in ladder:
            raise ValueError(
                f"initial_batch_size {self.initial_batch_size} not on ladder {ladder}"
            )


class TranscriptionAdapter(ABC):
    """Uniform batch-transcribe interface.

    One batch is in flight per adapter instance; the harness serializes
    calls and never requires adapters to be thread-safe.
    """

    name: str = "adapter"

    @abstractmethod
    def transcribe_batch(
        self, requests: Sequence[TranscriptionRequest]
    ) -> list[TranscriptionResponse]:
        """Return exactly one response per request, in any order."""

    def close(self) -> None:  # pragma: no cover - default no-op
        pass


def match_responses(
    requests: Sequence[TranscriptionRequest],
    responses: Sequence[TranscriptionResponse],
) -> dict[str, TranscriptionResponse]:
    """Re-associate responses with requests by sample id.

    Raises ProtocolError when the response set is not a bijection over the
    request ids.
    """
    by_id: dict[str, TranscriptionResponse] = {}
    for resp in responses:
        if resp.sample_id in by_id:
            raise ProtocolError(f"duplicate response for id: {resp.sample_id}")
        by_id[resp.sample_id] = resp
    wanted = {r.sample_id for r in requests}
    for sample_id in wanted:
        if sample_id not in by_id:
            raise ProtocolError(f"missing response for id: {sample_id}")
    for sample_id in by_id:
        if sample_id not in wanted:
            raise ProtocolError(f"unexpected response id: {sample_id}")
    return by_id
