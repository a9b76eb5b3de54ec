"""Regression corpus: formulas with pinned verdicts per profile.

Each line of the corpus file is one JSON object naming a formula, a
profile, the decision mode (``sat`` or ``valid``) and the expected verdict,
plus a short source note for the reader.  ``run_corpus`` replays every
row through the decision procedure and reports each mismatch; the JSON form
of a run is stable, so two runs over the same corpus are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .models import LogicProfile
from .parser import parse
from .tableau import decide_sat, decide_valid

_REQUIRED_KEYS = {"id", "formula", "profile", "mode", "expected", "source"}
_MODES = {"sat": ("sat", "unsat"), "valid": ("valid", "invalid")}


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    formula: str
    profile: LogicProfile
    mode: str
    expected: str
    source: str


@dataclass(frozen=True)
class CorpusRow:
    """One replayed corpus entry and what the engine actually said."""

    entry: CorpusEntry
    actual: str

    @property
    def ok(self) -> bool:
        return self.actual == self.entry.expected


@dataclass(frozen=True)
class CorpusResult:
    rows: tuple[CorpusRow, ...]

    @property
    def passed(self) -> int:
        return sum(1 for row in self.rows if row.ok)

    @property
    def failed(self) -> int:
        return sum(1 for row in self.rows if not row.ok)

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failed": self.failed,
            "rows": [
                {
                    "id": row.entry.id,
                    "formula": row.entry.formula,
                    "profile": row.entry.profile.value,
                    "mode": row.entry.mode,
                    "expected": row.entry.expected,
                    "actual": row.actual,
                    "ok": row.ok,
                }
                for row in self.rows
            ],
        }


def _entry_from_dict(raw: dict, where: str) -> CorpusEntry:
    if not isinstance(raw, dict):
        raise ValueError(f"{where}: corpus row must be a JSON object")
    missing = _REQUIRED_KEYS - raw.keys()
    if missing:
        raise ValueError(f"{where}: missing keys {sorted(missing)}")
    unknown = raw.keys() - _REQUIRED_KEYS
    if unknown:
        raise ValueError(f"{where}: unknown keys {sorted(unknown)}")
    mode = raw["mode"]
    if mode not in _MODES:
        raise ValueError(f"{where}: mode must be 'sat' or 'valid', got {mode!r}")
    if raw["expected"] not in _MODES[mode]:
        raise ValueError(
            f"{where}: expected verdict for mode {mode!r} must be one of {_MODES[mode]}"
        )
    parse(raw["formula"])  # fail fast on malformed rows
    return CorpusEntry(
        id=raw["id"],
        formula=raw["formula"],
        profile=LogicProfile.from_name(raw["profile"]),
        mode=mode,
        expected=raw["expected"],
        source=raw["source"],
    )


def load_corpus(path: str | Path | None = None) -> tuple[CorpusEntry, ...]:
    """Load corpus entries from ``path``, or the bundled corpus by default."""
    if path is None:
        text = (
            resources.files("doxa").joinpath("data/corpus.jsonl").read_text("utf-8")
        )
        origin = "bundled corpus"
    else:
        text = Path(path).read_text("utf-8")
        origin = str(path)
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        raw = json.loads(line)
        entries.append(_entry_from_dict(raw, f"{origin}:{lineno}"))
    ids = [e.id for e in entries]
    if len(set(ids)) != len(ids):
        raise ValueError(f"{origin}: duplicate corpus ids")
    return tuple(entries)


def run_entry(entry: CorpusEntry) -> CorpusRow:
    f = parse(entry.formula)
    if entry.mode == "sat":
        verdict = decide_sat(f, entry.profile)
        actual = "sat" if verdict.is_sat else "unsat"
    else:
        verdict = decide_valid(f, entry.profile)
        actual = "valid" if verdict.valid else "invalid"
    return CorpusRow(entry=entry, actual=actual)


def run_corpus(entries: tuple[CorpusEntry, ...] | None = None) -> CorpusResult:
    if entries is None:
        entries = load_corpus()
    return CorpusResult(rows=tuple(run_entry(e) for e in entries))
