"""HTTP backend client.

POSTs `{endpoint}/transcribe` with `{"items": [{"id", "audio_b64",
"language"}]}`; the response body mirrors the subprocess protocol's
`result`/`error` documents. HTTP status 413 maps to a capacity error.
"""

from __future__ import annotations

import base64
import re
from pathlib import Path
from typing import Sequence

import requests

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


def _slug(endpoint: str) -> str:
    return re.sub(r"[^a-zA-Z0-9]+", "-", endpoint).strip("-") or "http"


class HttpAdapter(TranscriptionAdapter):
    def __init__(self, endpoint: str, timeout_s: float = 60.0, name: str | None = None) -> None:
        if "://" not in endpoint:
            endpoint = "http://" + endpoint
        self._endpoint = endpoint.rstrip("/")
        self._timeout_s = timeout_s
        self._session = requests.Session()
        self.name = name or _slug(endpoint)

    def transcribe_batch(
        self, requests_batch: Sequence[TranscriptionRequest]
    ) -> list[TranscriptionResponse]:
        items = []
        for r in requests_batch:
            path = Path(r.audio_path)
            try:
                audio = path.read_bytes()
            except OSError as exc:
                raise TransportError(f"cannot read audio file {r.audio_path}: {exc}") from exc
            items.append(
                {
                    "id": r.sample_id,
                    "audio_b64": base64.b64encode(audio).decode("ascii"),
                    "language": r.language_hint,
                }
            )
        try:
            resp = self._session.post(
                f"{self._endpoint}/transcribe",
                json={"items": items},
                timeout=self._timeout_s,
            )
        except requests.Timeout as exc:
            raise AdapterTimeoutError(f"no reply within {self._timeout_s} s") from exc
        except requests.RequestException as exc:
            raise TransportError(f"cannot reach adapter endpoint {self._endpoint}: {exc}") from exc

        if resp.status_code == 413:
            raise CapacityError(f"endpoint rejected batch of {len(items)} (413)")
        if resp.status_code != 200:
            raise TransportError(f"endpoint returned status {resp.status_code}")
        try:
            body = resp.json()
        except ValueError as exc:
            raise ProtocolError("endpoint reply is not JSON") from exc

        op = body.get("op")
        if op == "error":
            if body.get("kind") == "capacity":
                raise CapacityError(str(body.get("msg", "capacity error")))
            raise TransportError(str(body.get("msg", "fatal adapter error")))
        if op != "result" or not isinstance(body.get("items"), list):
            raise ProtocolError(f"unexpected reply body: {str(body)[:200]}")
        responses = []
        for item in body["items"]:
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
        matched = match_responses(requests_batch, responses)
        return [matched[r.sample_id] for r in requests_batch]

    def close(self) -> None:
        self._session.close()
