import json

import pytest

from asrbench.adapters import AdapterConfig, MockAdapter, TransportError
from asrbench.corpus import Track, load_manifest
from asrbench.metrics import corpus_wer
from asrbench.normalizer import NormMode, load_rules
from asrbench.runner import (
    FixedClock,
    load_result,
    persist_result,
    rules_for_track,
    run_eval,
    STATUS_ABORTED,
    STATUS_COMPLETE,
)

from conftest import write_manifest


def mock_config(initial=64, ladder=(64, 48, 32, 16, 8, 4, 2, 1)):
    return AdapterConfig(
        kind="mock", endpoint_or_cmd="", initial_batch_size=initial, backoff_ladder=ladder
    )


def run_echo(echo_manifest, **kwargs):
    manifest, fixture = echo_manifest
    adapter = MockAdapter.from_fixture(fixture)
    return run_eval(adapter, manifest, Track.LEADERBOARD, None, mock_config(), **kwargs)


def test_rules_for_track_binding():
    assert rules_for_track(Track.LEADERBOARD).mode is NormMode.ENGLISH_FULL
    assert rules_for_track(Track.LONGFORM).mode is NormMode.ENGLISH_FULL
    assert rules_for_track(Track.MULTILINGUAL).mode is NormMode.BASIC


def test_identity_run_scores_zero(echo_manifest):
    result = run_echo(echo_manifest)
    assert result.status == STATUS_COMPLETE
    assert result.wer is not None and result.wer.value == 0.0
    assert result.skipped == 0
    assert len(result.per_sample) == 10
    assert result.model_id == "fixture"


def test_single_substitution_rate(tmp_path):
    samples = [
        {"id": "a", "text": "one two three four five six seven eight nine ten", "duration_s": 5.0},
        {"id": "b", "text": "alpha beta gamma delta epsilon zeta eta theta iota kappa", "duration_s": 5.0},
    ]
    path = write_manifest(tmp_path, "twenty", ["leaderboard"], samples)
    table = {
        "a": samples[0]["text"],
        "b": samples[1]["text"].replace("gamma", "gumma"),
    }
    result = run_eval(
        MockAdapter(table), load_manifest(path), Track.LEADERBOARD, None, mock_config()
    )
    assert result.wer.value == pytest.approx(0.05)


def test_normalization_symmetry(tmp_path):
    path = write_manifest(
        tmp_path, "sym", ["leaderboard"], [{"id": "a", "text": "Twenty-Three Dollars, Please!"}]
    )
    table = {"a": "twenty three dollars please"}
    result = run_eval(
        MockAdapter(table), load_manifest(path), Track.LEADERBOARD, None, mock_config()
    )
    assert result.wer.value == 0.0


def test_sleep_mock_rtfx(tmp_path):
    samples = [
        {"id": f"s{i}", "text": f"sample number {i}", "duration_s": 50.0} for i in range(10)
    ]
    path = write_manifest(tmp_path, "timing", ["leaderboard"], samples)
    manifest = load_manifest(path)
    adapter = MockAdapter(
        {s["id"]: s["text"] for s in samples},
        ms_per_audio_second=2.0,
        durations={s["id"]: s["duration_s"] for s in samples},
    )
    result = run_eval(adapter, manifest, Track.LEADERBOARD, None, mock_config())
    # 500 s of audio at 2 ms per audio-second -> about 1 s wall, rtfx around 500
    assert result.rtfx.audio_seconds == pytest.approx(500.0)
    assert result.rtfx.rtfx == pytest.approx(500.0, rel=0.2)


def test_empty_reference_samples_are_skipped(tmp_path):
    samples = [
        {"id": "good", "text": "hello world", "duration_s": 4.0},
        {"id": "fillers", "text": "Uh, mhm...", "duration_s": 9.0},
    ]
    path = write_manifest(tmp_path, "skips", ["leaderboard"], samples)
    adapter = MockAdapter({"good": "hello world", "fillers": "whatever"})
    result = run_eval(adapter, load_manifest(path), Track.LEADERBOARD, None, mock_config())
    assert result.skipped == 1
    assert len(result.per_sample) == 1
    assert result.skipped + len(result.per_sample) == 2
    # skipped samples contribute to neither pool
    assert result.rtfx.audio_seconds == pytest.approx(4.0)
    assert result.wer.denominator == 2


def test_empty_selection_is_an_error(tmp_path):
    path = write_manifest(tmp_path, "node", ["multilingual"], [{"id": "a", "text": "x", "language": "fr"}])
    with pytest.raises(ValueError, match="no samples for track"):
        run_eval(
            MockAdapter({}), load_manifest(path), Track.MULTILINGUAL, None, mock_config(),
            language="de",
        )


def test_multilingual_uses_basic_rules(tmp_path):
    samples = [{"id": "de1", "text": "zwei Hüte, bitte", "language": "de", "duration_s": 3.0}]
    path = write_manifest(tmp_path, "de_set", ["multilingual"], samples)
    adapter = MockAdapter({"de1": "zwei hüte bitte"})
    result = run_eval(adapter, load_manifest(path), Track.MULTILINGUAL, None, mock_config())
    assert result.wer.value == 0.0
    assert result.per_sample[0].ref_norm_tokens == ("zwei", "hüte", "bitte")


def test_abort_mid_run_persists_partial(tmp_path, echo_manifest):
    manifest, fixture = echo_manifest

    class DiesMidway(MockAdapter):
        def transcribe_batch(self, requests):
            if self.calls >= 2:
                self.calls += 1
                raise TransportError("backend crashed")
            return super().transcribe_batch(requests)

    adapter = DiesMidway.from_fixture(fixture)
    result = run_eval(
        adapter, manifest, Track.LEADERBOARD, None, mock_config(4, (4, 2, 1))
    )
    assert result.status == STATUS_ABORTED
    assert 0 < len(result.per_sample) < 10

    path = persist_result(result, tmp_path / "out")
    on_disk = json.loads(path.read_text(encoding="utf-8"))
    assert on_disk["status"] == "aborted"
    assert load_result(path) == result


def test_recompute_equals_stored(echo_manifest, tmp_path):
    result = run_echo(echo_manifest)
    path = persist_result(result, tmp_path / "out")
    loaded = load_result(path)
    recomputed = corpus_wer(s.edit_counts for s in loaded.per_sample)
    assert recomputed == loaded.wer


def test_wall_shares_sum_to_call_time(echo_manifest):
    result = run_echo(echo_manifest)
    assert sum(s.wall_s for s in result.per_sample) == pytest.approx(
        result.rtfx.transcription_seconds, rel=1e-9
    )


def test_persist_round_trip_and_atomic_overwrite(echo_manifest, tmp_path):
    result = run_echo(echo_manifest)
    out = tmp_path / "results"
    path = persist_result(result, out)
    assert path == out / "fixture" / "synthetic_en.json"
    assert load_result(path) == result
    # overwrite in place leaves no temp litter and stays loadable
    path2 = persist_result(result, out)
    assert path2 == path
    assert load_result(path) == result
    assert list(path.parent.glob("*.tmp")) == []


def test_persist_unwritable_dir(echo_manifest, tmp_path):
    result = run_echo(echo_manifest)
    blocked = tmp_path / "blocked"
    blocked.mkdir()
    # a file where the model directory should go makes the write impossible
    (blocked / result.model_id).write_text("in the way", encoding="utf-8")
    with pytest.raises(OSError, match="blocked"):
        persist_result(result, blocked)


def test_fixed_clock_runs_are_identical(echo_manifest):
    first = run_echo(echo_manifest, clock=FixedClock())
    second = run_echo(echo_manifest, clock=FixedClock())
    assert first == second
    assert json.dumps(first.to_dict()) == json.dumps(second.to_dict())


def test_language_filter_recorded_in_result_and_filename(tmp_path):
    samples = [
        {"id": "de1", "text": "hallo", "language": "de", "duration_s": 2.0},
        {"id": "fr1", "text": "salut", "language": "fr", "duration_s": 2.0},
    ]
    path = write_manifest(tmp_path, "ml", ["multilingual"], samples)
    adapter = MockAdapter({"de1": "hallo", "fr1": "salut"})
    result = run_eval(
        adapter, load_manifest(path), Track.MULTILINGUAL, None, mock_config(), language="de"
    )
    assert result.language == "de"
    assert len(result.per_sample) == 1
    out = persist_result(result, tmp_path / "r")
    assert out.name == "ml.de.json"
