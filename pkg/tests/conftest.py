from __future__ import annotations

import json
from pathlib import Path

import pytest

from asrbench.corpus import load_manifest
from asrbench.normalizer import NormMode, load_rules


@pytest.fixture(scope="session")
def en_rules():
    return load_rules(NormMode.ENGLISH_FULL)


@pytest.fixture(scope="session")
def basic_rules():
    return load_rules(NormMode.BASIC)


def write_manifest(
    directory: Path,
    dataset_id: str,
    tracks: list[str],
    samples: list[dict],
    *,
    create_audio: bool = True,
    filename: str | None = None,
) -> Path:
    """Write a manifest plus (by default) dummy audio files next to it."""
    path = directory / (filename or f"{dataset_id}.jsonl")
    lines = [json.dumps({"dataset_id": dataset_id, "tracks": tracks, "license": "CC-BY-4.0"})]
    for sample in samples:
        record = {
            "id": sample["id"],
            "audio": sample.get("audio", f"audio/{sample['id']}.wav"),
            "duration_s": sample.get("duration_s", 5.0),
            "text": sample["text"],
            "language": sample.get("language", "en"),
        }
        if "style_tags" in sample:
            record["style_tags"] = sample["style_tags"]
        lines.append(json.dumps(record, ensure_ascii=False))
        if create_audio:
            audio = directory / record["audio"]
            audio.parent.mkdir(parents=True, exist_ok=True)
            audio.write_bytes(b"RIFF0000WAVE")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_fixture_tsv(path: Path, table: dict[str, str], config: dict | None = None) -> Path:
    """Write a mock-adapter fixture file."""
    lines = ["# test fixture"]
    for key, value in (config or {}).items():
        lines.append(f"{key}={value}")
    for sample_id, hypothesis in table.items():
        lines.append(f"{sample_id}\t{hypothesis}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def echo_manifest(tmp_path):
    """10-sample English manifest whose fixture hypotheses echo the references."""
    texts = [
        "The quick brown fox jumps over the lazy dog",
        "She sells sea shells by the sea shore",
        "A journey of one thousand miles begins with a single step",
        "It costs zero dollars to listen carefully",
        "Twenty three birds sat on the fence",
        "We will not surrender the harbor tonight",
        "Every model deserves a fair benchmark",
        "The meeting starts at nine",
        "Please read the second chapter aloud",
        "Numbers like four hundred and five are spoken often",
    ]
    samples = [
        {"id": f"s{i:02d}", "text": text, "duration_s": 4.0} for i, text in enumerate(texts)
    ]
    manifest_path = write_manifest(tmp_path, "synthetic_en", ["leaderboard"], samples)
    fixture_path = write_fixture_tsv(
        tmp_path / "fixture.tsv", {s["id"]: s["text"] for s in samples}
    )
    return load_manifest(manifest_path), fixture_path
