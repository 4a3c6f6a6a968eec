"""Loading of the shipped, editable data tables.

All tables are UTF-8 text files, one mapping per line, tab-separated.
``#`` starts a comment line.  The default files live in ``arud/data``;
the ``ARUD_TABLE_DIR`` environment variable overrides the directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import script
from .script import ALIF, WASL_ALIF, Word, parse_line

ENV_TABLE_DIR = "ARUD_TABLE_DIR"


def _read_table(name: str, table_dir: str | None = None) -> list[str]:
    table_dir = table_dir or os.environ.get(ENV_TABLE_DIR)
    if table_dir:
        text = Path(table_dir, name).read_text(encoding="utf-8")
    else:
        text = resources.files("arud.data").joinpath(name).read_text("utf-8")
    lines = []
    for line in text.splitlines():
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        lines.append(line)
    return lines


def data_version(table_dir: str | None = None) -> str:
    try:
        return _read_table("VERSION", table_dir)[0].strip()
    except (FileNotFoundError, IndexError):
        return "unknown"


def fold_base(base: str) -> str:
    """Fold letter variants used as match keys: wasl-alif matches plain alif."""
    return ALIF if base == WASL_ALIF else base


def word_key(word: Word) -> str:
    return "".join(fold_base(g.base) for g in word)


@dataclass
class SpecialWordTable:
    """Surface base letters -> prosodically complete replacement words."""

    entries: dict[str, list[Word]] = field(default_factory=dict)

    @classmethod
    def load(cls, table_dir: str | None = None) -> "SpecialWordTable":
        entries: dict[str, list[Word]] = {}
        for line in _read_table("special_words.tsv", table_dir):
            key, repl = line.split("\t")
            word = parse_line(repl).words[0]
            entries.setdefault(key, []).append(word)
        return cls(entries)

    def candidates(self, word: Word) -> list[Word]:
        return self.entries.get(word_key(word), [])


@dataclass
class JunctureTable:
    """Preceding-word base letters -> vowel given to its final sakin letter."""

    exact: dict[str, str] = field(default_factory=dict)
    suffix: dict[str, str] = field(default_factory=dict)
    default: str = "kasra"

    @classmethod
    def load(cls, table_dir: str | None = None) -> "JunctureTable":
        table = cls()
        for line in _read_table("juncture.tsv", table_dir):
            key, vowel, mode = line.split("\t")
            if vowel not in script.VOWEL_KIND_TO_CHAR:
                raise ValueError(f"unknown juncture vowel {vowel!r}")
            if mode == "exact":
                table.exact[key] = vowel
            elif mode == "suffix":
                table.suffix[key] = vowel
            else:
                raise ValueError(f"unknown juncture mode {mode!r}")
        return table

    def vowel_for(self, word: Word) -> str:
        key = word_key(word)
        if key in self.exact:
            return self.exact[key]
        for suffix, vowel in self.suffix.items():
            if key.endswith(suffix) and len(key) > len(suffix):
                return vowel
        return self.default


@dataclass
class KnownWordTable:
    """Unambiguous fully diacritized words, keyed by base letters."""

    entries: dict[str, list[Word]] = field(default_factory=dict)

    @classmethod
    def load(cls, table_dir: str | None = None) -> "KnownWordTable":
        entries: dict[str, list[Word]] = {}
        for line in _read_table("known_words.tsv", table_dir):
            word = parse_line(line.strip()).words[0]
            entries.setdefault(word_key(word), []).append(word)
        return cls(entries)

    def candidates(self, word: Word) -> list[Word]:
        return self.entries.get(word_key(word), [])


@dataclass
class SilentWordTable:
    """Word base letters -> zero-based index of the silent letter."""

    entries: dict[str, int] = field(default_factory=dict)

    @classmethod
    def load(cls, table_dir: str | None = None) -> "SilentWordTable":
        entries = {}
        for line in _read_table("silent_words.tsv", table_dir):
            key, idx = line.split("\t")
            entries[key] = int(idx)
        return cls(entries)

    def silent_index(self, word: Word) -> int | None:
        return self.entries.get(word_key(word))


@dataclass
class TableSet:
    special: SpecialWordTable
    juncture: JunctureTable
    known: KnownWordTable
    silent: SilentWordTable

    @classmethod
    def load(cls, table_dir: str | None = None) -> "TableSet":
        return cls(
            special=SpecialWordTable.load(table_dir),
            juncture=JunctureTable.load(table_dir),
            known=KnownWordTable.load(table_dir),
            silent=SilentWordTable.load(table_dir),
        )


_default_tables: TableSet | None = None


def default_tables() -> TableSet:
    """Shared lazily loaded table set for the default data directory."""
    global _default_tables
    if _default_tables is None:
        _default_tables = TableSet.load()
    return _default_tables
