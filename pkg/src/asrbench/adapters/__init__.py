"""Pluggable transcription backends behind one batch-transcribe contract."""

from asrbench.adapters.base import (
    AdapterConfig,
    AdapterError,
    AdapterTimeoutError,
    CapacityError,
    DEFAULT_BACKOFF_LADDER,
    ProtocolError,
    TranscriptionAdapter,
    TranscriptionRequest,
    TranscriptionResponse,
    TransportError,
)
from asrbench.adapters.batching import (
    BatchAbort,
    BatchAttempt,
    BatchOutcome,
    warmup,
    with_adaptive_batching,
)
from asrbench.adapters.http import HttpAdapter
from asrbench.adapters.mock import MockAdapter
from asrbench.adapters.subproc import SubprocessAdapter

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "AdapterTimeoutError",
    "BatchAbort",
    "BatchAttempt",
    "BatchOutcome",
    "CapacityError",
    "DEFAULT_BACKOFF_LADDER",
    "HttpAdapter",
    "MockAdapter",
    "ProtocolError",
    "SubprocessAdapter",
    "TranscriptionAdapter",
    "TranscriptionRequest",
    "TranscriptionResponse",
    "TransportError",
    "warmup",
    "with_adaptive_batching",
]
