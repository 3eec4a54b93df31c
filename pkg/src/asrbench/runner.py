"""Orchestrates one (model, dataset, track) evaluation.

Samples are selected from the manifest, transcribed through an adapter
with adaptive batching, and both references and hypotheses are normalized
with the same rules before alignment. The RTFx denominator is the summed
wall time of adapter calls only (batch formation, normalization, and
scoring are excluded; model load is excluded via warmup). References that
normalize to zero tokens are skipped, and excluded from both WER and RTFx
pools.

Per-track normalization: leaderboard and longform use the full English
pipeline; multilingual uses basic mode.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from asrbench.adapters import (
    AdapterConfig,
    BatchAbort,
    TranscriptionAdapter,
    TranscriptionRequest,
    with_adaptive_batching,
)
from asrbench.corpus import DatasetManifest, Track, audio_file, select
from asrbench.metrics import EditCounts, RtfxMeasurement, WerScore, align, corpus_wer, rtfx
from asrbench.normalizer import NormMode, NormalizationRules, load_rules, normalize

STATUS_COMPLETE = "complete"
STATUS_ABORTED = "aborted"

TRACK_MODES = {
    Track.LEADERBOARD: NormMode.ENGLISH_FULL,
    Track.LONGFORM: NormMode.ENGLISH_FULL,
    Track.MULTILINGUAL: NormMode.BASIC,
}


def rules_for_track(
    track: Track, data_dir: Path | str | None = None, language: str | None = None
) -> NormalizationRules:
    """The normalization rules a track is scored with."""
    mode = TRACK_MODES[track]
    if mode is NormMode.BASIC:
        return load_rules(mode, language=language or "multi")
    return load_rules(mode, language="en", data_dir=data_dir)


class SystemClock:
    """Wall clock: monotonic perf counter plus UTC timestamps."""

    def perf(self) -> float:
        return time.perf_counter()

    def now_iso(self) -> str:
        return datetime.now(timezone.utc).isoformat(timespec="seconds")


class FixedClock:
    """Deterministic clock for reproducibility testing.

    Every perf() reading advances by a fixed tick, and timestamps are
    constant, so two identical runs produce byte-identical results.
    """

    def __init__(self, tick_s: float = 0.001, timestamp: str = "1970-01-01T00:00:00+00:00"):
        self._tick = tick_s
        self._now = 0.0
        self._timestamp = timestamp

    def perf(self) -> float:
        self._now += self._tick
        return self._now

    def now_iso(self) -> str:
        return self._timestamp


@dataclass(frozen=True)
class SampleScore:
    """Per-sample record inside an evaluation result."""

    sample_id: str
    language: str
    ref_raw: str
    hyp_raw: str
    ref_norm_tokens: tuple[str, ...]
    hyp_norm_tokens: tuple[str, ...]
    edit_counts: EditCounts
    audio_s: float
    wall_s: float


@dataclass(frozen=True)
class EvalResult:
    model_id: str
    dataset_id: str
    track: Track
    per_sample: tuple[SampleScore, ...]
    wer: WerScore | None
    rtfx: RtfxMeasurement | None
    skipped: int
    config_digest: str
    status: str
    started_at: str
    finished_at: str
    language: str | None = None

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "dataset_id": self.dataset_id,
            "track": self.track.value,
            "language": self.language,
            "per_sample": [
                {
                    "sample_id": s.sample_id,
                    "language": s.language,
                    "ref_raw": s.ref_raw,
                    "hyp_raw": s.hyp_raw,
                    "ref_norm_tokens": list(s.ref_norm_tokens),
                    "hyp_norm_tokens": list(s.hyp_norm_tokens),
                    "edit_counts": {
                        "substitutions": s.edit_counts.substitutions,
                        "deletions": s.edit_counts.deletions,
                        "insertions": s.edit_counts.insertions,
                        "ref_len": s.edit_counts.ref_len,
                    },
                    "audio_s": s.audio_s,
                    "wall_s": s.wall_s,
                }
                for s in self.per_sample
            ],
            "wer": None
            if self.wer is None
            else {
                "value": self.wer.value,
                "numerator": self.wer.numerator,
                "denominator": self.wer.denominator,
            },
            "rtfx": None
            if self.rtfx is None
            else {
                "audio_seconds": self.rtfx.audio_seconds,
                "transcription_seconds": self.rtfx.transcription_seconds,
                "rtfx": self.rtfx.rtfx,
            },
            "skipped": self.skipped,
            "config_digest": self.config_digest,
            "status": self.status,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "EvalResult":
        per_sample = tuple(
            SampleScore(
                sample_id=s["sample_id"],
                language=s["language"],
                ref_raw=s["ref_raw"],
                hyp_raw=s["hyp_raw"],
                ref_norm_tokens=tuple(s["ref_norm_tokens"]),
                hyp_norm_tokens=tuple(s["hyp_norm_tokens"]),
                edit_counts=EditCounts(**s["edit_counts"]),
                audio_s=s["audio_s"],
                wall_s=s["wall_s"],
            )
            for s in obj["per_sample"]
        )
        wer = None if obj["wer"] is None else WerScore(**obj["wer"])
        rtfx_m = None if obj["rtfx"] is None else RtfxMeasurement(**obj["rtfx"])
        return cls(
            model_id=obj["model_id"],
            dataset_id=obj["dataset_id"],
            track=Track(obj["track"]),
            language=obj.get("language"),
            per_sample=per_sample,
            wer=wer,
            rtfx=rtfx_m,
            skipped=obj["skipped"],
            config_digest=obj["config_digest"],
            status=obj["status"],
            started_at=obj["started_at"],
            finished_at=obj["finished_at"],
        )


def _config_digest(rules: NormalizationRules, config: AdapterConfig) -> str:
    canonical = json.dumps(
        {
            "rules_id": rules.rules_id,
            "kind": config.kind,
            "endpoint_or_cmd": config.endpoint_or_cmd,
            "initial_batch_size": config.initial_batch_size,
            "backoff_ladder": list(config.backoff_ladder),
            "timeout_s": config.timeout_s,
        },
        sort_keys=True,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def run_eval(
    adapter: TranscriptionAdapter,
    manifest: DatasetManifest,
    track: Track,
    rules: NormalizationRules | None,
    config: AdapterConfig,
    *,
    language: str | None = None,
    model_id: str | None = None,
    clock: SystemClock | FixedClock | None = None,
) -> EvalResult:
    """Evaluate one adapter against one manifest for one track.

    The adapter should already be warm (see adapters.warmup). A fatal
    adapter error does not raise: the partial result comes back with
    status "aborted" so it can still be persisted.
    """
    clock = clock or SystemClock()
    rules = rules or rules_for_track(track, language=language)
    samples = select(manifest, track, language)
    if not samples:
        raise ValueError(f"no samples for track {track.value!r} in dataset {manifest.dataset_id!r}")

    started_at = clock.now_iso()

    scored: list[tuple] = []  # (sample, ref_norm)
    skipped = 0
    for sample in samples:
        ref_norm = normalize(sample.reference, rules)
        if not ref_norm.tokens:
            skipped += 1
            continue
        scored.append((sample, ref_norm))

    requests = [
        TranscriptionRequest(
            sample_id=sample.id,
            audio_path=str(audio_file(sample, manifest.root)),
            language_hint=sample.language,
        )
        for sample, _ in scored
    ]

    status = STATUS_COMPLETE
    try:
        outcome = with_adaptive_batching(adapter, requests, config, clock=clock.perf)
    except BatchAbort as abort:
        outcome = abort.outcome
        status = STATUS_ABORTED

    durations = {sample.id: sample.duration_s for sample, _ in scored}
    wall_share: dict[str, float] = {}
    for attempt in outcome.attempts:
        if not attempt.ok:
            continue
        batch_audio = sum(durations.get(sid, 0.0) for sid in attempt.sample_ids)
        for sid in attempt.sample_ids:
            if batch_audio > 0:
                wall_share[sid] = attempt.elapsed_s * durations.get(sid, 0.0) / batch_audio
            else:
                wall_share[sid] = attempt.elapsed_s / len(attempt.sample_ids)

    per_sample: list[SampleScore] = []
    for sample, ref_norm in scored:
        response = outcome.responses.get(sample.id)
        if response is None:  # aborted before this sample was transcribed
            continue
        hyp_norm = normalize(response.hypothesis, rules)
        counts = align(ref_norm.tokens, hyp_norm.tokens)
        per_sample.append(
            SampleScore(
                sample_id=sample.id,
                language=sample.language,
                ref_raw=sample.reference,
                hyp_raw=response.hypothesis,
                ref_norm_tokens=ref_norm.tokens,
                hyp_norm_tokens=hyp_norm.tokens,
                edit_counts=counts,
                audio_s=sample.duration_s,
                wall_s=wall_share.get(sample.id, 0.0),
            )
        )

    wer = corpus_wer(s.edit_counts for s in per_sample) if per_sample else None
    scored_audio = sum(s.audio_s for s in per_sample)
    call_seconds = outcome.call_seconds
    rtfx_m = (
        rtfx(scored_audio, call_seconds)
        if per_sample and scored_audio > 0 and call_seconds > 0
        else None
    )

    return EvalResult(
        model_id=model_id or adapter.name,
        dataset_id=manifest.dataset_id,
        track=track,
        language=language,
        per_sample=tuple(per_sample),
        wer=wer,
        rtfx=rtfx_m,
        skipped=skipped,
        config_digest=_config_digest(rules, config),
        status=status,
        started_at=started_at,
        finished_at=clock.now_iso(),
    )


def result_filename(result: EvalResult) -> str:
    if result.language:
        return f"{result.dataset_id}.{result.language}.json"
    return f"{result.dataset_id}.json"


def persist_result(result: EvalResult, out_dir: Path | str) -> Path:
    """Atomically write `{out_dir}/{model_id}/{dataset_id}.json`.

    An existing file is replaced via temp-file rename, never truncated in
    place.
    """
    out_dir = Path(out_dir)
    target_dir = out_dir / result.model_id
    target = target_dir / result_filename(result)
    tmp = target_dir / (target.name + ".tmp")
    try:
        target_dir.mkdir(parents=True, exist_ok=True)
        with tmp.open("w", encoding="utf-8") as handle:
            json.dump(result.to_dict(), handle, indent=2, ensure_ascii=False)
            handle.write("\n")
        os.replace(tmp, target)
    except OSError as exc:
        raise OSError(f"failed to write result file under {target_dir}: {exc}") from exc
    return target


def load_result(path: Path | str) -> EvalResult:
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        return EvalResult.from_dict(json.load(handle))


def load_results(results_dir: Path | str) -> list[EvalResult]:
    """Load every result file under a results directory, sorted by path."""
    results_dir = Path(results_dir)
    results = []
    for path in sorted(results_dir.glob("*/*.json")):
        results.append(load_result(path))
    return results
