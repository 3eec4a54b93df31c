"""Child-process backend speaking a line-delimited JSON protocol.

One JSON document per line, UTF-8, over the child's stdin/stdout:

  handshake   -> {"op": "hello", "version": 1}
  handshake  <-  {"op": "hello", "name": ..., "version": 1}
  per batch   -> {"op": "transcribe", "items": [{"id", "audio", "language"}]}
  per batch  <-  {"op": "result", "items": [{"id", "text", "infer_ms"}]}
             or  {"op": "error", "kind": "capacity"|"fatal", "msg": ...}
  shutdown    -> {"op": "bye"}

Audio travels by path, never by bytes; decoding is the adapter's job.
"""

from __future__ import annotations

import json
import os
import select
import shlex
import subprocess
import time
from typing import Sequence

from asrbench.adapters.base import (
    AdapterTimeoutError,
    CapacityError,
    ProtocolError,
    TranscriptionAdapter,
    TranscriptionRequest,
    TranscriptionResponse,
    TransportError,
    match_responses,
)

PROTOCOL_VERSION = 1


class SubprocessAdapter(TranscriptionAdapter):
    def __init__(self, cmd: str | Sequence[str], timeout_s: float = 60.0) -> None:
        self._argv = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
        if not self._argv:
            raise ValueError("empty adapter command")
        self._timeout_s = timeout_s
        self._proc: subprocess.Popen | None = None
        self._buffer = b""
        self.name = "subprocess"

    # -- process / framing ------------------------------------------------

    def _ensure_started(self) -> None:
        if self._proc is not None:
            return
        try:
            self._proc = subprocess.Popen(
                self._argv,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=None,
            )
        except OSError as exc:
            raise TransportError(f"cannot launch adapter {self._argv[0]!r}: {exc}") from exc
        reply = self._roundtrip({"op": "hello", "version": PROTOCOL_VERSION})
        if reply.get("op") != "hello":
            raise ProtocolError(f"expected hello reply, got {reply.get('op')!r}")
        self.name = str(reply.get("name", self.name))

    def _send(self, obj: dict) -> None:
        assert self._proc is not None and self._proc.stdin is not None
        data = json.dumps(obj, ensure_ascii=False).encode("utf-8") + b"\n"
        try:
            self._proc.stdin.write(data)
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise TransportError(f"adapter process closed stdin: {exc}") from exc

    def _read_line(self) -> bytes:
        assert self._proc is not None and self._proc.stdout is not None
        fd = self._proc.stdout.fileno()
        deadline = time.monotonic() + self._timeout_s
        while b"\n" not in self._buffer:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise AdapterTimeoutError(
                    f"adapter did not reply within {self._timeout_s} s"
                )
            ready, _, _ = select.select([fd], [], [], remaining)
            if not ready:
                continue
            chunk = os.read(fd, 65536)
            if not chunk:
                raise TransportError("adapter process closed its output pipe")
            self._buffer += chunk
        line, _, self._buffer = self._buffer.partition(b"\n")
        return line

    def _roundtrip(self, obj: dict) -> dict:
        self._send(obj)
        line = self._read_line()
        try:
            reply = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ProtocolError(f"invalid protocol line from adapter: {line[:200]!r}") from exc
        if not isinstance(reply, dict):
            raise ProtocolError("adapter reply is not a JSON object")
        return reply

    # -- contract ----------------------------------------------------------

    def transcribe_batch(
        self, requests: Sequence[TranscriptionRequest]
    ) -> list[TranscriptionResponse]:
        self._ensure_started()
        items = [
            {"id": r.sample_id, "audio": r.audio_path, "language": r.language_hint}
            for r in requests
        ]
        reply = self._roundtrip({"op": "transcribe", "items": items})
        op = reply.get("op")
        if op == "error":
            kind = reply.get("kind")
            msg = str(reply.get("msg", ""))
            if kind == "capacity":
                raise CapacityError(msg or "adapter reported capacity error")
            raise TransportError(msg or "adapter reported fatal error")
        if op != "result":
            raise ProtocolError(f"unexpected op from adapter: {op!r}")
        raw = reply.get("items")
        if not isinstance(raw, list):
            raise ProtocolError("result reply missing items list")
        responses = []
        for item in raw:
            if not isinstance(item, dict) or "id" not in item:
                raise ProtocolError(f"malformed result item: {item!r}")
            infer_ms = item.get("infer_ms")
            responses.append(
                TranscriptionResponse(
                    sample_id=str(item["id"]),
                    hypothesis=str(item.get("text", "")),
                    backend_infer_ms=float(infer_ms) if infer_ms is not None else None,
                )
            )
        matched = match_responses(requests, responses)
        return [matched[r.sample_id] for r in requests]

    def close(self) -> None:
        if self._proc is None:
            return
        proc, self._proc = self._proc, None
        try:
            if proc.stdin is not None:
                proc.stdin.write(b'{"op":"bye"}\n')
                proc.stdin.flush()
                proc.stdin.close()
        except (BrokenPipeError, OSError):
            pass
        try:
            proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            proc.kill()
            proc.wait()
