"""Command-line entry point.

Subcommands: run (one model x dataset x track evaluation), report
(aggregate persisted results into leaderboards), normalize (stdin/stdout
text filter), validate (manifest checks).

Exit codes are a stable contract: 0 success, 1 usage or configuration
error, 2 aborted evaluation, 3 validation failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from asrbench.adapters import (
    AdapterConfig,
    AdapterError,
    DEFAULT_BACKOFF_LADDER,
    HttpAdapter,
    MockAdapter,
    SubprocessAdapter,
    warmup,
)
from asrbench.corpus import Track, load_manifest, validate_manifest
from asrbench.normalizer import NormMode, load_rules, normalize
from asrbench.normalizer.rules import RulesFileError
from asrbench.report import (
    RENDER_FORMATS,
    aggregate_longform,
    aggregate_multilingual,
    aggregate_track,
    load_registry,
    render,
)
from asrbench.runner import (
    FixedClock,
    STATUS_ABORTED,
    SystemClock,
    load_results,
    persist_result,
    rules_for_track,
    run_eval,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ABORTED = 2
EXIT_VALIDATION = 3

OUT_DIR_ENV = "ASRBENCH_OUT"

_FORMAT_EXT = {"json": "json", "csv": "csv", "markdown": "md", "html": "html"}

_AGGREGATORS = {
    Track.LEADERBOARD: aggregate_track,
    Track.MULTILINGUAL: aggregate_multilingual,
    Track.LONGFORM: aggregate_longform,
}

logger = logging.getLogger("asrbench")


class _CliError(Exception):
    """Usage/configuration problem; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the CLI contract reserves 2 for
    # aborted evaluations, so remap usage errors to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit((EXIT_USAGE, f"{self.prog}: error: {message}"))


def _build_parser() -> _Parser:
    parser = _Parser(prog="asrbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate one adapter against one manifest")
    run.add_argument("--config", help="JSON config file; flags override its keys")
    run.add_argument("--manifest", help="manifest file (line-delimited JSON)")
    run.add_argument("--track", choices=[t.value for t in Track])
    run.add_argument("--language", help="optional language filter (ISO-639-1)")
    run.add_argument("--adapter", help="adapter spec: mock:PATH | subprocess:CMD | http:URL")
    run.add_argument("--rules", help="directory of normalization rule files")
    run.add_argument("--batch-size", type=int, help="initial batch size (default 64)")
    run.add_argument("--timeout", type=float, help="adapter timeout in seconds (default 60)")
    run.add_argument("--model", help="model id override (default: adapter-reported name)")
    run.add_argument("--out", help=f"results directory (default ${OUT_DIR_ENV})")
    run.add_argument(
        "--fixed-clock",
        action="store_true",
        help="use a deterministic clock (reproducibility testing; timings are synthetic)",
    )

    report = sub.add_parser("report", help="aggregate results into leaderboard files")
    report.add_argument("--in", dest="in_dir", required=True, help="results directory")
    report.add_argument("--track", required=True, choices=[t.value for t in Track])
    report.add_argument("--format", default="csv", help="comma-separated: json,csv,markdown,html")
    report.add_argument("--registry", help="model registry file (line-delimited JSON)")
    report.add_argument("--out", help=f"output directory (default ${OUT_DIR_ENV} or --in)")

    norm = sub.add_parser("normalize", help="normalize stdin to stdout, one line at a time")
    norm.add_argument(
        "--mode",
        default=NormMode.ENGLISH_FULL.value,
        choices=[m.value for m in NormMode],
    )
    norm.add_argument("--rules", help="directory of normalization rule files")
    norm.add_argument("--language", default="en")

    val = sub.add_parser("validate", help="validate a manifest and print a report")
    val.add_argument("--manifest", required=True)
    val.add_argument("--rules", help="directory of normalization rule files")

    return parser


# -- run ---------------------------------------------------------------------


def _merge_config_file(args: argparse.Namespace) -> argparse.Namespace:
    if not getattr(args, "config", None):
        return args
    path = Path(args.config)
    try:
        file_values = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise _CliError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(file_values, dict):
        raise _CliError(f"config file {path} must hold a JSON object")
    for key, value in file_values.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise _CliError(f"config file {path}: unknown key {key!r}")
        if getattr(args, attr) in (None, False):
            setattr(args, attr, value)
    return args


def _build_ladder(batch_size: int) -> tuple[int, ...]:
    if batch_size < 1:
        raise _CliError(f"batch size must be >= 1, got {batch_size}")
    return (batch_size,) + tuple(r for r in DEFAULT_BACKOFF_LADDER if r < batch_size)


def _parse_adapter_spec(spec: str) -> tuple[str, str]:
    kind, sep, rest = spec.partition(":")
    if not sep or kind not in ("mock", "subprocess", "http") or not rest:
        raise _CliError(
            f"bad adapter spec {spec!r}; expected mock:PATH, subprocess:CMD, or http:URL"
        )
    return kind, rest


def _build_adapter(kind: str, target: str, timeout_s: float, manifest):
    if kind == "mock":
        adapter = MockAdapter.from_fixture(target)
        adapter.bind_durations({s.id: s.duration_s for s in manifest.samples})
        return adapter
    if kind == "subprocess":
        return SubprocessAdapter(target, timeout_s=timeout_s)
    return HttpAdapter(target, timeout_s=timeout_s)


def _cmd_run(args: argparse.Namespace) -> int:
    args = _merge_config_file(args)
    for required in ("manifest", "track", "adapter"):
        if not getattr(args, required):
            raise _CliError(f"--{required} is required (flag or config file)")
    out_dir = args.out or os.environ.get(OUT_DIR_ENV)
    if not out_dir:
        raise _CliError(f"--out is required (or set ${OUT_DIR_ENV})")

    track = Track(args.track)
    manifest = load_manifest(args.manifest)
    rules = rules_for_track(track, data_dir=args.rules, language=args.language)
    kind, target = _parse_adapter_spec(args.adapter)
    batch_size = args.batch_size or 64
    config = AdapterConfig(
        kind=kind,
        endpoint_or_cmd=target,
        initial_batch_size=batch_size,
        backoff_ladder=_build_ladder(batch_size),
        timeout_s=args.timeout or 60.0,
    )
    clock = FixedClock() if args.fixed_clock else SystemClock()

    adapter = _build_adapter(kind, target, config.timeout_s, manifest)
    try:
        warm_s = warmup(adapter)
        logger.info("warmup took %.3f s", warm_s)
        result = run_eval(
            adapter,
            manifest,
            track,
            rules,
            config,
            language=args.language,
            model_id=args.model,
            clock=clock,
        )
    finally:
        adapter.close()

    path = persist_result(result, out_dir)
    wer_pct = "-" if result.wer is None else f"{result.wer.value * 100:.2f}"
    rtfx_str = "-" if result.rtfx is None else f"{result.rtfx.rtfx:.2f}"
    print(
        f"{result.model_id} x {result.dataset_id} [{track.value}]: "
        f"wer={wer_pct}% rtfx={rtfx_str} skipped={result.skipped} -> {path}"
    )
    if result.status == STATUS_ABORTED:
        print("run aborted; partial result persisted", file=sys.stderr)
        return EXIT_ABORTED
    return EXIT_OK


# -- report --------------------------------------------------------------------


def _cmd_report(args: argparse.Namespace) -> int:
    in_dir = Path(args.in_dir)
    if not in_dir.is_dir():
        raise _CliError(f"results directory not found: {in_dir}")
    formats = [f.strip() for f in args.format.split(",") if f.strip()]
    for fmt in formats:
        if fmt not in RENDER_FORMATS:
            raise _CliError(f"unknown format: {fmt!r} (valid: {', '.join(RENDER_FORMATS)})")
    if not formats:
        raise _CliError("no output formats requested")

    track = Track(args.track)
    results = [r for r in load_results(in_dir) if r.track is track]
    if not results:
        raise _CliError(f"no results for track {track.value!r} under {in_dir}")

    registry = load_registry(args.registry) if args.registry else {}
    rows = _AGGREGATORS[track](results, registry)

    out_dir = Path(args.out or os.environ.get(OUT_DIR_ENV) or in_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for fmt in formats:
        target = out_dir / f"{track.value}.{_FORMAT_EXT[fmt]}"
        target.write_text(render(rows, fmt, title=f"ASR Leaderboard - {track.value}"), encoding="utf-8")
        print(str(target))
    return EXIT_OK


# -- normalize / validate --------------------------------------------------------


def _cmd_normalize(args: argparse.Namespace) -> int:
    mode = NormMode(args.mode)
    rules = load_rules(mode, language=args.language, data_dir=args.rules)
    for line in sys.stdin:
        print(" ".join(normalize(line.rstrip("\n"), rules).tokens))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    mode = (
        NormMode.ENGLISH_FULL
        if Track.LEADERBOARD in manifest.tracks or Track.LONGFORM in manifest.tracks
        else NormMode.BASIC
    )
    rules = load_rules(mode, data_dir=args.rules)
    report = validate_manifest(manifest, rules)
    for line in report.lines():
        print(line)
    if report.is_empty():
        print(f"{manifest.dataset_id}: ok ({len(manifest.samples)} samples)")
        return EXIT_OK
    return EXIT_VALIDATION


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # remapped usage errors and --help
        if isinstance(exc.code, tuple):
            code, message = exc.code
            print(message, file=sys.stderr)
            return code
        return int(exc.code or 0)

    handlers = {
        "run": _cmd_run,
        "report": _cmd_report,
        "normalize": _cmd_normalize,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RulesFileError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AdapterError as exc:
        print(f"adapter error: {exc}", file=sys.stderr)
        return EXIT_ABORTED


if __name__ == "__main__":
    sys.exit(main())
