"""In-process mock backend driven by a fixture table.

Fixture file format: one `sample_id<TAB>hypothesis` per line, with an
optional third `duration_s` column used for simulated latency. Lines of
the form `key=value` (no tab) set the config keys `max_batch` and
`ms_per_audio_second`; `#` lines are comments.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Mapping, Sequence

from asrbench.adapters.base import (
    CapacityError,
    TranscriptionAdapter,
    TranscriptionRequest,
    TranscriptionResponse,
)


class MockAdapter(TranscriptionAdapter):
    def __init__(
        self,
        table: Mapping[str, str],
        *,
        max_batch: int | None = None,
        ms_per_audio_second: float | None = None,
        durations: Mapping[str, float] | None = None,
        name: str = "mock",
    ) -> None:
        self._table = dict(table)
        self._max_batch = max_batch
        self._ms_per_audio_second = ms_per_audio_second
        self._durations = dict(durations or {})
        self.name = name
        self.calls = 0

    @classmethod
    def from_fixture(cls, path: Path | str, name: str | None = None) -> "MockAdapter":
        path = Path(path)
        table: dict[str, str] = {}
        durations: dict[str, float] = {}
        max_batch: int | None = None
        ms_per_audio_second: float | None = None
        for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if "\t" in line:
                parts = line.split("\t")
                sample_id, hypothesis = parts[0], parts[1]
                table[sample_id] = hypothesis
                if len(parts) >= 3 and parts[2]:
                    try:
                        durations[sample_id] = float(parts[2])
                    except ValueError as exc:
                        raise ValueError(f"{path}:{lineno}: bad duration {parts[2]!r}") from exc
            elif "=" in line:
                key, _, value = line.partition("=")
                key = key.strip()
                value = value.strip()
                if key == "max_batch":
                    max_batch = int(value)
                elif key == "ms_per_audio_second":
                    ms_per_audio_second = float(value)
                else:
                    raise ValueError(f"{path}:{lineno}: unknown fixture config key {key!r}")
            else:
                raise ValueError(f"{path}:{lineno}: malformed fixture line {line!r}")
        return cls(
            table,
            max_batch=max_batch,
            ms_per_audio_second=ms_per_audio_second,
            durations=durations,
            name=name or path.stem,
        )

    def bind_durations(self, durations: Mapping[str, float]) -> None:
        """Supply audio durations (e.g. from a manifest) for latency simulation."""
        self._durations.update(durations)

    def transcribe_batch(
        self, requests: Sequence[TranscriptionRequest]
    ) -> list[TranscriptionResponse]:
        self.calls += 1
        if self._max_batch is not None and len(requests) > self._max_batch:
            raise CapacityError(
                f"batch of {len(requests)} exceeds max_batch={self._max_batch}"
            )
        if self._ms_per_audio_second:
            audio_s = sum(self._durations.get(r.sample_id, 0.0) for r in requests)
            time.sleep(self._ms_per_audio_second * audio_s / 1000.0)
        return [
            TranscriptionResponse(r.sample_id, self._table.get(r.sample_id, ""))
            for r in requests
        ]
