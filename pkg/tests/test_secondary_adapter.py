"""End-to-end conformance of the out-of-process fixture adapter.

Drives the Node implementation through the harness's subprocess transport
and holds it to the same contract as the in-process mock. Skipped when the
adapter has not been built (`npm run build` in fixture-adapter/); the rest
of the suite does not depend on it.
"""

import shutil
from pathlib import Path

import pytest

from asrbench.adapters import (
    AdapterConfig,
    CapacityError,
    MockAdapter,
    SubprocessAdapter,
    TranscriptionRequest,
    warmup,
    with_adaptive_batching,
)
from asrbench.corpus import Track
from asrbench.runner import run_eval

from conftest import write_fixture_tsv, write_manifest

ADAPTER_MAIN = Path(__file__).parent.parent / "fixture-adapter" / "dist" / "main.js"

pytestmark = pytest.mark.skipif(
    not ADAPTER_MAIN.exists() or shutil.which("node") is None,
    reason="fixture-adapter not built (run `npm run build` in fixture-adapter/)",
)


def node_adapter(fixture_path, *extra):
    return SubprocessAdapter(
        ["node", str(ADAPTER_MAIN), "--fixture", str(fixture_path), *extra],
        timeout_s=20.0,
    )


def test_handshake_reports_fixture_name(tmp_path):
    fixture = write_fixture_tsv(tmp_path / "f.tsv", {"a": "alpha"})
    adapter = node_adapter(fixture)
    try:
        warmup(adapter)
        assert adapter.name == "fixture"
    finally:
        adapter.close()


def test_echo_run_scores_zero_wer(tmp_path, echo_manifest):
    manifest, fixture = echo_manifest
    adapter = node_adapter(fixture)
    config = AdapterConfig(kind="subprocess", endpoint_or_cmd="node", timeout_s=20.0)
    try:
        warmup(adapter)
        result = run_eval(adapter, manifest, Track.LEADERBOARD, None, config)
    finally:
        adapter.close()
    assert result.status == "complete"
    assert result.wer.value == 0.0
    assert len(result.per_sample) == 10
    assert result.model_id == "fixture"


def test_capacity_backoff_engages_like_the_mock(tmp_path):
    table = {f"s{i:03d}": f"hypothesis {i}" for i in range(100)}
    fixture = write_fixture_tsv(tmp_path / "cap.tsv", table, config={"max_batch": 16})
    requests = [TranscriptionRequest(sid, f"/audio/{sid}.wav") for sid in sorted(table)]
    config = AdapterConfig(kind="subprocess", endpoint_or_cmd="node", timeout_s=20.0)

    adapter = node_adapter(fixture)
    try:
        outcome = with_adaptive_batching(adapter, requests, config)
    finally:
        adapter.close()

    assert [a.rung for a in outcome.attempts if not a.ok] == [64, 48, 32]
    assert outcome.final_rung == 16
    assert len(outcome.responses) == 100

    mock_outcome = with_adaptive_batching(MockAdapter(table, max_batch=16), requests, config)
    assert {k: v.hypothesis for k, v in outcome.responses.items()} == {
        k: v.hypothesis for k, v in mock_outcome.responses.items()
    }


def test_direct_capacity_error_surface(tmp_path):
    fixture = write_fixture_tsv(tmp_path / "one.tsv", {"a": "x"}, config={"max_batch": 1})
    adapter = node_adapter(fixture)
    try:
        with pytest.raises(CapacityError):
            adapter.transcribe_batch(
                [TranscriptionRequest("a", "/a.wav"), TranscriptionRequest("b", "/b.wav")]
            )
        (resp,) = adapter.transcribe_batch([TranscriptionRequest("a", "/a.wav")])
        assert resp.hypothesis == "x"
    finally:
        adapter.close()


def test_lookup_miss_yields_empty_hypothesis_not_crash(tmp_path):
    fixture = write_fixture_tsv(tmp_path / "f.tsv", {"a": "alpha"})
    adapter = node_adapter(fixture)
    try:
        out = adapter.transcribe_batch([TranscriptionRequest("ghost", "/g.wav")])
        assert out[0].hypothesis == ""
    finally:
        adapter.close()
