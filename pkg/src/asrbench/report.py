"""Leaderboard aggregation and rendering.

Per-dataset WERs are macro-averaged (unweighted mean of per-dataset
percentages) into a row's average; RTFx is pooled as total audio over
total transcription time. Rows rank ascending by average WER with a
deterministic tie-break: higher RTFx first, then model id. Closed-source
models (per the registry) carry no RTFx and render as "-".
"""

from __future__ import annotations

import csv
import html
import io
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from asrbench.runner import EvalResult

logger = logging.getLogger(__name__)

RENDER_FORMATS = ("json", "csv", "markdown", "html")


@dataclass(frozen=True)
class ModelCard:
    """Model metadata joined onto leaderboard rows by model_id."""

    model_id: str
    display_name: str
    organization: str
    open_source: bool
    encoder_family: str
    decoder_family: str
    n_languages: int
    notes: str = ""

    def __post_init__(self) -> None:
        if self.n_languages < 1:
            raise ValueError(f"model {self.model_id!r}: n_languages must be >= 1")


@dataclass
class LeaderboardRow:
    model_id: str
    avg_wer: float  # percent
    per_dataset_wer: dict[str, float] = field(default_factory=dict)  # percent
    rtfx: float | None = None
    rank: int = 0


def load_registry(path: Path | str) -> dict[str, ModelCard]:
    """Read a line-delimited JSON model registry."""
    path = Path(path)
    registry: dict[str, ModelCard] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            obj = json.loads(line)
            card = ModelCard(
                model_id=str(obj["model_id"]),
                display_name=str(obj.get("display_name", obj["model_id"])),
                organization=str(obj.get("organization", "")),
                open_source=bool(obj.get("open_source", True)),
                encoder_family=str(obj.get("encoder_family", "")),
                decoder_family=str(obj.get("decoder_family", "")),
                n_languages=int(obj.get("n_languages", 1)),
                notes=str(obj.get("notes", "")),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad model card: {exc}") from exc
        if card.model_id in registry:
            raise ValueError(f"{path}:{lineno}: duplicate model id {card.model_id!r}")
        registry[card.model_id] = card
    return registry


def _group_by_model(results: Iterable[EvalResult]) -> dict[str, dict[str, EvalResult]]:
    grouped: dict[str, dict[str, EvalResult]] = defaultdict(dict)
    for result in results:
        if result.dataset_id in grouped[result.model_id]:
            raise ValueError(
                f"duplicate result for model {result.model_id!r} "
                f"dataset {result.dataset_id!r}"
            )
        grouped[result.model_id][result.dataset_id] = result
    return grouped


def _pooled_rtfx(results: Sequence[EvalResult]) -> float | None:
    audio = 0.0
    seconds = 0.0
    for result in results:
        if result.rtfx is None:
            return None
        audio += result.rtfx.audio_seconds
        seconds += result.rtfx.transcription_seconds
    if seconds <= 0:
        return None
    return audio / seconds


def _rank(rows: list[LeaderboardRow]) -> list[LeaderboardRow]:
    rows.sort(
        key=lambda r: (
            r.avg_wer,
            -(r.rtfx if r.rtfx is not None else float("-inf")),
            r.model_id,
        )
    )
    for position, row in enumerate(rows, start=1):
        row.rank = position
    return rows


def aggregate_track(
    results: Sequence[EvalResult], registry: Mapping[str, ModelCard]
) -> list[LeaderboardRow]:
    """Rank models by their dataset-averaged WER.

    A model missing any of the track's datasets (or with an unusable
    result) is excluded with a warning.
    """
    if not results:
        raise ValueError("no results")
    datasets = sorted({r.dataset_id for r in results})
    grouped = _group_by_model(results)
    rows: list[LeaderboardRow] = []
    for model_id in sorted(grouped):
        per_dataset = grouped[model_id]
        missing = [d for d in datasets if d not in per_dataset or per_dataset[d].wer is None]
        if missing:
            logger.warning("excluding %s: no usable result for %s", model_id, ", ".join(missing))
            continue
        wer_pct = {d: per_dataset[d].wer.value * 100.0 for d in datasets}
        card = registry.get(model_id)
        if card is not None and not card.open_source:
            rtfx_value = None
        else:
            rtfx_value = _pooled_rtfx([per_dataset[d] for d in datasets])
        rows.append(
            LeaderboardRow(
                model_id=model_id,
                avg_wer=sum(wer_pct.values()) / len(wer_pct),
                per_dataset_wer=wer_pct,
                rtfx=rtfx_value,
            )
        )
    return _rank(rows)


def aggregate_longform(
    results: Sequence[EvalResult], registry: Mapping[str, ModelCard]
) -> list[LeaderboardRow]:
    """Long-form rows: same averaging as aggregate_track, pooled RTFx."""
    return aggregate_track(results, registry)


def aggregate_multilingual(
    results: Sequence[EvalResult], registry: Mapping[str, ModelCard]
) -> list[LeaderboardRow]:
    """Per-language rows: for each (model, language), the mean WER over the
    datasets that include that language.

    Rows carry languages (not datasets) as their columns; a language with
    no data anywhere is simply absent. Models are not required to cover
    every dataset here, since language coverage differs by dataset.
    """
    if not results:
        raise ValueError("no results")
    # (model, dataset, language) -> pooled edits / reference tokens
    pools: dict[str, dict[str, dict[str, tuple[int, int]]]] = defaultdict(
        lambda: defaultdict(dict)
    )
    for result in results:
        by_lang: dict[str, tuple[int, int]] = defaultdict(lambda: (0, 0))
        for s in result.per_sample:
            edits, ref_len = by_lang[s.language]
            by_lang[s.language] = (edits + s.edit_counts.total_edits, ref_len + s.edit_counts.ref_len)
        for lang, (edits, ref_len) in by_lang.items():
            if ref_len == 0:
                continue
            pools[result.model_id][lang][result.dataset_id] = (edits, ref_len)

    rows: list[LeaderboardRow] = []
    for model_id in sorted(pools):
        lang_wer: dict[str, float] = {}
        for lang in sorted(pools[model_id]):
            per_dataset = pools[model_id][lang]
            values = [100.0 * edits / ref_len for edits, ref_len in per_dataset.values()]
            lang_wer[lang] = sum(values) / len(values)
        if not lang_wer:
            logger.warning("excluding %s: no scorable samples", model_id)
            continue
        rows.append(
            LeaderboardRow(
                model_id=model_id,
                avg_wer=sum(lang_wer.values()) / len(lang_wer),
                per_dataset_wer=lang_wer,
                rtfx=None,
            )
        )
    return _rank(rows)


# -- rendering --------------------------------------------------------------


def _columns(rows: Sequence[LeaderboardRow]) -> list[str]:
    keys: set[str] = set()
    for row in rows:
        keys.update(row.per_dataset_wer)
    return sorted(keys)


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"


def _render_csv(rows: Sequence[LeaderboardRow], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rank", "model", "avg_wer", "rtfx", *columns])
    for row in rows:
        writer.writerow(
            [
                row.rank,
                row.model_id,
                _fmt(row.avg_wer),
                _fmt(row.rtfx),
                *[_fmt(row.per_dataset_wer.get(c)) for c in columns],
            ]
        )
    return buf.getvalue()


def _render_markdown(rows: Sequence[LeaderboardRow], columns: list[str]) -> str:
    header = ["rank", "model", "avg_wer", "rtfx", *columns]
    lines = [
        "| " + " | ".join(header) + " |",
        "| " + " | ".join("---" for _ in header) + " |",
    ]
    for row in rows:
        cells = [
            str(row.rank),
            row.model_id,
            _fmt(row.avg_wer),
            _fmt(row.rtfx),
            *[_fmt(row.per_dataset_wer.get(c)) for c in columns],
        ]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _render_json(rows: Sequence[LeaderboardRow], columns: list[str]) -> str:
    payload = {
        "columns": columns,
        "rows": [
            {
                "rank": row.rank,
                "model": row.model_id,
                "avg_wer": round(row.avg_wer, 2),
                "rtfx": None if row.rtfx is None else round(row.rtfx, 2),
                "per_dataset_wer": {
                    c: round(row.per_dataset_wer[c], 2)
                    for c in columns
                    if c in row.per_dataset_wer
                },
            }
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


_HTML_STYLE = """\
body { font-family: system-ui, sans-serif; margin: 2rem; }
table { border-collapse: collapse; }
th, td { border: 1px solid #ccc; padding: 0.35rem 0.7rem; text-align: left; }
th { background: #f0f0f0; cursor: pointer; user-select: none; }
tr:nth-child(even) { background: #fafafa; }
"""

_HTML_SCRIPT = """\
document.querySelectorAll("th").forEach(function (th, col) {
  th.addEventListener("click", function () {
    var tbody = th.closest("table").querySelector("tbody");
    var rows = Array.from(tbody.querySelectorAll("tr"));
    var asc = th.dataset.asc !== "1";
    th.dataset.asc = asc ? "1" : "0";
    rows.sort(function (a, b) {
      var x = a.cells[col].textContent;
      var y = b.cells[col].textContent;
      var nx = parseFloat(x);
      var ny = parseFloat(y);
      var bothNumeric = !isNaN(nx) && !isNaN(ny);
      if (x === "-") return 1;
      if (y === "-") return -1;
      var cmp = bothNumeric ? nx - ny : x.localeCompare(y);
      return asc ? cmp : -cmp;
    });
    rows.forEach(function (r) { tbody.appendChild(r); });
  });
});
"""


def _render_html(rows: Sequence[LeaderboardRow], columns: list[str], title: str) -> str:
    header_cells = "".join(
        f"<th>{html.escape(c)}</th>" for c in ["rank", "model", "avg_wer", "rtfx", *columns]
    )
    body_rows = []
    for row in rows:
        cells = [
            str(row.rank),
            html.escape(row.model_id),
            _fmt(row.avg_wer),
            _fmt(row.rtfx),
            *[_fmt(row.per_dataset_wer.get(c)) for c in columns],
        ]
        body_rows.append("<tr>" + "".join(f"<td>{c}</td>" for c in cells) + "</tr>")
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n<head>\n<meta charset="utf-8">\n'
        f"<title>{html.escape(title)}</title>\n"
        f"<style>\n{_HTML_STYLE}</style>\n</head>\n<body>\n"
        f"<h1>{html.escape(title)}</h1>\n"
        "<table>\n<thead>\n<tr>" + header_cells + "</tr>\n</thead>\n<tbody>\n"
        + "\n".join(body_rows)
        + "\n</tbody>\n</table>\n"
        f"<script>\n{_HTML_SCRIPT}</script>\n</body>\n</html>\n"
    )


def render(rows: Sequence[LeaderboardRow], fmt: str, title: str = "ASR Leaderboard") -> str:
    """Render ranked rows to one of: json, csv, markdown, html.

    Output is a deterministic function of the rows; WER and RTFx show two
    decimals and missing RTFx renders as "-".
    """
    columns = _columns(rows)
    if fmt == "csv":
        return _render_csv(rows, columns)
    if fmt == "markdown":
        return _render_markdown(rows, columns)
    if fmt == "json":
        return _render_json(rows, columns)
    if fmt == "html":
        return _render_html(rows, columns, title)
    raise ValueError(f"unknown format: {fmt!r} (valid: {', '.join(RENDER_FORMATS)})")
