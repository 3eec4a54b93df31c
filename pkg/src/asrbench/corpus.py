"""Dataset manifests: loading, validation, and track/language selection.

A manifest is a UTF-8 line-delimited JSON file: a header line
`{"dataset_id":..., "tracks":[...], "license":...}` followed by one sample
line per utterance `{"id":..., "audio":..., "duration_s":..., "text":...,
"language":...}`. Audio is referenced by path and treated as opaque bytes;
decoding is a backend concern.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from asrbench.normalizer import NormalizationRules

LONGFORM_THRESHOLD_S = 30.0


class Track(str, Enum):
    LEADERBOARD = "leaderboard"
    MULTILINGUAL = "multilingual"
    LONGFORM = "longform"


@dataclass(frozen=True)
class Sample:
    """One audio utterance with its reference transcript."""

    id: str
    audio_path: str
    duration_s: float
    reference: str
    language: str
    dataset_id: str
    style_tags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class DatasetManifest:
    dataset_id: str
    tracks: tuple[Track, ...]
    license: str
    samples: tuple[Sample, ...]
    # Directory relative audio paths resolve against; not part of identity.
    root: Path | None = field(default=None, compare=False)

    @property
    def total_duration_h(self) -> float:
        return sum(s.duration_s for s in self.samples) / 3600.0


def audio_file(sample: Sample, root: Path | None) -> Path:
    path = Path(sample.audio_path)
    if path.is_absolute() or root is None:
        return path
    return root / path


def is_longform(sample: Sample) -> bool:
    """True iff the audio is strictly longer than the 30 s boundary."""
    return sample.duration_s > LONGFORM_THRESHOLD_S


def _parse_header(obj: dict, path: Path) -> tuple[str, tuple[Track, ...], str]:
    try:
        dataset_id = str(obj["dataset_id"])
        raw_tracks = obj["tracks"]
        license_ = str(obj["license"])
    except KeyError as exc:
        raise ValueError(f"{path}:1: manifest header missing field {exc.args[0]!r}") from exc
    if not isinstance(raw_tracks, list) or not raw_tracks:
        raise ValueError(f"{path}:1: manifest header needs a non-empty tracks list")
    try:
        tracks = tuple(Track(t) for t in raw_tracks)
    except ValueError as exc:
        valid = ", ".join(t.value for t in Track)
        raise ValueError(f"{path}:1: unknown track in header (valid: {valid})") from exc
    return dataset_id, tracks, license_


def load_manifest(path: Path | str) -> DatasetManifest:
    """Parse a manifest file, preserving sample order.

    Malformed lines fail with their line number; duplicate sample ids fail
    naming the id. Semantic problems (bad durations, missing audio) are the
    job of validate_manifest, not the loader.
    """
    path = Path(path)
    samples: list[Sample] = []
    seen: set[str] = set()
    header = None
    with path.open("r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ValueError(f"{path}:{lineno}: expected a JSON object")
            if header is None:
                header = _parse_header(obj, path)
                continue
            try:
                sample = Sample(
                    id=str(obj["id"]),
                    audio_path=str(obj["audio"]),
                    duration_s=float(obj["duration_s"]),
                    reference=str(obj["text"]),
                    language=str(obj["language"]),
                    dataset_id=header[0],
                    style_tags=frozenset(str(t) for t in obj.get("style_tags", [])),
                )
            except KeyError as exc:
                raise ValueError(f"{path}:{lineno}: sample missing field {exc.args[0]!r}") from exc
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad sample record: {exc}") from exc
            if not sample.language:
                raise ValueError(f"{path}:{lineno}: sample {sample.id!r} has empty language")
            if sample.id in seen:
                raise ValueError(f"duplicate sample id: {sample.id}")
            seen.add(sample.id)
            samples.append(sample)
    if header is None:
        raise ValueError(f"{path}: empty manifest (missing header line)")
    dataset_id, tracks, license_ = header
    return DatasetManifest(
        dataset_id=dataset_id,
        tracks=tracks,
        license=license_,
        samples=tuple(samples),
        root=path.parent,
    )


def serialize_manifest(manifest: DatasetManifest, path: Path | str) -> Path:
    """Write a manifest back out in the line-delimited format."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        header = {
            "dataset_id": manifest.dataset_id,
            "tracks": [t.value for t in manifest.tracks],
            "license": manifest.license,
        }
        handle.write(json.dumps(header, ensure_ascii=False) + "\n")
        for s in manifest.samples:
            record = {
                "id": s.id,
                "audio": s.audio_path,
                "duration_s": s.duration_s,
                "text": s.reference,
                "language": s.language,
                "style_tags": sorted(s.style_tags),
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    return path


def select(manifest: DatasetManifest, track: Track, language: str | None = None) -> list[Sample]:
    """Pure filter over manifest samples for one track.

    Order is preserved and nothing is duplicated. The longform track keeps
    only samples strictly longer than the boundary.
    """
    if track not in manifest.tracks:
        raise ValueError(f"dataset {manifest.dataset_id!r} not registered for track {track.value!r}")
    samples = [s for s in manifest.samples if language is None or s.language == language]
    if track is Track.LONGFORM:
        samples = [s for s in samples if is_longform(s)]
    return samples


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" | "warning"
    sample_id: str | None
    message: str


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == "warning"]

    def is_empty(self) -> bool:
        return not self.issues

    def lines(self) -> list[str]:
        return [
            f"{i.severity}: {i.sample_id or '<manifest>'}: {i.message}" for i in self.issues
        ]


def validate_manifest(
    manifest: DatasetManifest, rules: "NormalizationRules | None" = None
) -> ValidationReport:
    """Report missing audio, non-positive durations, and unusable references.

    References that normalize to zero tokens are warnings (the runner skips
    them); an empty report means the manifest is fully usable.
    """
    report = ValidationReport()
    seen: set[str] = set()
    for s in manifest.samples:
        if s.id in seen:
            report.issues.append(ValidationIssue("error", s.id, "duplicate sample id"))
        seen.add(s.id)
        if s.duration_s <= 0:
            report.issues.append(
                ValidationIssue("error", s.id, f"non-positive duration: {s.duration_s}")
            )
        if not audio_file(s, manifest.root).exists():
            report.issues.append(
                ValidationIssue("error", s.id, f"missing audio file: {s.audio_path}")
            )
        if not s.reference.strip():
            report.issues.append(ValidationIssue("error", s.id, "empty reference"))
        elif rules is not None:
            from asrbench.normalizer import normalize

            if not normalize(s.reference, rules).tokens:
                report.issues.append(
                    ValidationIssue("warning", s.id, "reference normalizes to zero tokens")
                )
    return report
