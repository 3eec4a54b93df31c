"""Normalization rule tables and their on-disk format.

Rule tables ship as plain-text data files so the pipeline stays auditable:
`spelling.tsv` and `contractions.tsv` hold one `key<TAB>value` mapping per
line, `fillers.txt` one word per line; lines beginning with `#` are
comments. The rules identifier is a digest of the loaded files, so results
record exactly which tables produced them.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

SPELLING_FILE = "spelling.tsv"
CONTRACTIONS_FILE = "contractions.tsv"
FILLERS_FILE = "fillers.txt"

_REQUIRED_FILLERS = frozenset({"uh", "mhm"})

_SPELLING_TOKEN_RE = re.compile(r"[a-z0-9]+")
_CONTRACTION_KEY_RE = re.compile(r"[a-z0-9']+")
_CONTRACTION_VALUE_RE = re.compile(r"[a-z0-9]+(?: [a-z0-9]+)*")
_FILLER_RE = re.compile(r"[a-z]+")


class NormMode(str, Enum):
    """Pipeline selector: full English treatment or language-agnostic basic."""

    ENGLISH_FULL = "english_full"
    BASIC = "basic"


@dataclass(frozen=True)
class NormalizationRules:
    """Immutable rule set consumed by the normalization pipeline.

    In basic mode the table fields are empty and ignored.
    """

    language: str
    mode: NormMode
    spelling_map: dict[str, str] = field(default_factory=dict)
    filler_set: frozenset[str] = frozenset()
    contraction_map: dict[str, str] = field(default_factory=dict)
    rules_id: str = "unversioned"

    def __post_init__(self) -> None:
        if self.mode is NormMode.ENGLISH_FULL:
            missing = _REQUIRED_FILLERS - self.filler_set
            if missing:
                raise ValueError(
                    f"english_full filler set must contain {sorted(_REQUIRED_FILLERS)}; "
                    f"missing {sorted(missing)}"
                )


class RulesFileError(ValueError):
    """A rules data file is malformed or violates a table invariant."""


def _iter_data_lines(text: str, name: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def _read_pairs(text: str, name: str, key_re: re.Pattern, value_re: re.Pattern) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, line in _iter_data_lines(text, name):
        parts = line.split("\t")
        if len(parts) != 2:
            raise RulesFileError(f"{name}:{lineno}: expected key<TAB>value, got {line!r}")
        key, value = parts
        if not key_re.fullmatch(key):
            raise RulesFileError(f"{name}:{lineno}: invalid key {key!r}")
        if not value_re.fullmatch(value):
            raise RulesFileError(f"{name}:{lineno}: invalid value {value!r}")
        if key in pairs:
            raise RulesFileError(f"{name}:{lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def _read_words(text: str, name: str) -> frozenset[str]:
    words = set()
    for lineno, line in _iter_data_lines(text, name):
        if not _FILLER_RE.fullmatch(line):
            raise RulesFileError(f"{name}:{lineno}: invalid filler word {line!r}")
        words.add(line)
    return frozenset(words)


def _default_data_dir():
    return resources.files("asrbench.normalizer").joinpath("data")


def load_rules(
    mode: NormMode | str = NormMode.ENGLISH_FULL,
    language: str = "en",
    data_dir: Path | str | None = None,
) -> NormalizationRules:
    """Load a rule set from a data directory (the packaged tables by default).

    Basic-mode rules carry no tables and do not touch the filesystem.
    """
    mode = NormMode(mode)
    if mode is NormMode.BASIC:
        return NormalizationRules(language=language, mode=mode, rules_id="basic-v1")

    root = Path(data_dir) if data_dir is not None else _default_data_dir()
    texts: dict[str, str] = {}
    for name in (SPELLING_FILE, CONTRACTIONS_FILE, FILLERS_FILE):
        node = root.joinpath(name) if hasattr(root, "joinpath") else root / name
        try:
            texts[name] = node.read_text(encoding="utf-8")
        except (FileNotFoundError, OSError) as exc:
            raise RulesFileError(f"cannot read rules file {name} under {root}: {exc}") from exc

    spelling = _read_pairs(texts[SPELLING_FILE], SPELLING_FILE, _SPELLING_TOKEN_RE, _SPELLING_TOKEN_RE)
    contractions = _read_pairs(
        texts[CONTRACTIONS_FILE], CONTRACTIONS_FILE, _CONTRACTION_KEY_RE, _CONTRACTION_VALUE_RE
    )
    fillers = _read_words(texts[FILLERS_FILE], FILLERS_FILE)

    digest = hashlib.sha256()
    for name in (SPELLING_FILE, CONTRACTIONS_FILE, FILLERS_FILE):
        digest.update(name.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(texts[name].encode("utf-8"))
        digest.update(b"\x00")
    rules_id = f"{language}-full-{digest.hexdigest()[:12]}"

    return NormalizationRules(
        language=language,
        mode=mode,
        spelling_map=spelling,
        filler_set=fillers,
        contraction_map=contractions,
        rules_id=rules_id,
    )
