"""Corpus preparation: cleaning, filtering and full-diacritization.

Turns raw, inconsistently diacritized lines into scan-ready lines.
Stage order matters: acceptance filtering runs on the text as found,
then the normalization heuristics (connective-alif guessing, silent
letter marking, default sukun) complete the diacritization, and a
verification scan rejects anything the transformation cannot handle.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, field, replace as dc_replace

from .errors import EmptyHemistich, ScanError, ScriptError
from . import scansion
from .script import (
    ALIF,
    ARABIC_LETTERS,
    LAM,
    MARKS,
    TATWEEL,
    WASL_ALIF,
    WAW,
    Grapheme,
    ScriptLine,
    fix_diacritic_order,
    parse_line,
    render_line,
    word_diacritization_ratio,
)
from .tables import KnownWordTable, SilentWordTable, TableSet, default_tables

log = logging.getLogger(__name__)

REASON_OK = "ok"
REASON_TOO_FEW_WORDS = "too_few_words"
REASON_WORD_UNDIACRITIZED = "word_undiacritized"
REASON_BELOW_LETTER_RATIO = "below_letter_ratio"
REASON_FOREIGN_RESIDUE = "foreign_residue"
FILTER_REASONS = (
    REASON_TOO_FEW_WORDS,
    REASON_WORD_UNDIACRITIZED,
    REASON_BELOW_LETTER_RATIO,
    REASON_FOREIGN_RESIDUE,
    REASON_OK,
)


@dataclass(frozen=True)
class FilterDecision:
    accepted: bool
    reason: str

    def __post_init__(self):
        if self.reason not in FILTER_REASONS:
            raise ValueError(f"unknown reason {self.reason!r}")
        if self.accepted != (self.reason == REASON_OK):
            raise ValueError("accepted flag must mirror the reason")


MARK_KINDS = (
    "fatha", "damma", "kasra", "sukun",
    "tanwin_fath", "tanwin_damm", "tanwin_kasr",
    "shadda", "silence",
)


@dataclass
class DiacriticStats:
    """Per-mark counts over a stream of parsed lines."""

    counts: dict = field(default_factory=lambda: {k: 0 for k in MARK_KINDS})
    total_letters: int = 0
    wasl_letters: int = 0
    lines: int = 0

    @property
    def total_diacritics(self) -> int:
        return sum(self.counts.values())

    def add_line(self, line: ScriptLine) -> None:
        self.lines += 1
        for g in line.graphemes():
            self.total_letters += 1
            if g.vowel is not None:
                self.counts[g.vowel] += 1
            if g.shadda:
                self.counts["shadda"] += 1
            if g.silent:
                self.counts["silence"] += 1
            if g.is_wasl:
                self.wasl_letters += 1

    def merge(self, other: "DiacriticStats") -> "DiacriticStats":
        merged = DiacriticStats(
            counts={k: self.counts[k] + other.counts[k] for k in MARK_KINDS},
            total_letters=self.total_letters + other.total_letters,
            wasl_letters=self.wasl_letters + other.wasl_letters,
            lines=self.lines + other.lines,
        )
        return merged

    def render_report(self) -> str:
        out = [f"lines: {self.lines}"]
        for kind in MARK_KINDS:
            out.append(f"{kind}: {self.counts[kind]}")
        out.append(f"wasl_letters: {self.wasl_letters}")
        out.append(f"total_diacritics: {self.total_diacritics}")
        out.append(f"total_letters: {self.total_letters}")
        return "\n".join(out)


def compute_stats(lines) -> DiacriticStats:
    stats = DiacriticStats()
    for line in lines:
        stats.add_line(line)
    return stats


def join_hemistichs(first: str, second: str) -> str:
    first, second = first.strip(), second.strip()
    if not first or not second:
        raise EmptyHemistich("both verse halves must be non-empty")
    return f"{first} {second}"


def clean_line(raw: str) -> str:
    """Keep Arabic letters, the nine marks and whitespace only.

    Marks whose host character was removed go with it; whitespace runs
    collapse to single spaces and mark order is canonicalized.
    """
    text = unicodedata.normalize("NFC", raw)
    kept: list[str] = []
    host_kept = False  # whether the preceding base character survived
    for ch in text:
        if ch in ARABIC_LETTERS:
            kept.append(ch)
            host_kept = True
        elif ch in MARKS:
            if host_kept:
                kept.append(ch)
        elif ch.isspace():
            kept.append(" ")
            host_kept = False
        elif ch == TATWEEL or unicodedata.category(ch).startswith("M"):
            # tatweel and out-of-inventory combining marks vanish without
            # cutting the letter/mark linkage
            continue
        else:
            host_kept = False
    collapsed = " ".join("".join(kept).split())
    if not collapsed:
        return ""
    return fix_diacritic_order(collapsed)


def filter_line(line: ScriptLine, min_words: int = 4,
                min_ratio: float = 0.5) -> FilterDecision:
    """Acceptance rules: enough words, every word sufficiently marked."""
    if line.word_count() < min_words:
        return FilterDecision(False, REASON_TOO_FEW_WORDS)
    for word in line.words:
        ratio = word_diacritization_ratio(word)
        if ratio == 0.0:
            return FilterDecision(False, REASON_WORD_UNDIACRITIZED)
        if ratio < min_ratio:
            return FilterDecision(False, REASON_BELOW_LETTER_RATIO)
    return FilterDecision(True, REASON_OK)


def _bare(g: Grapheme) -> bool:
    return (g.vowel is None and not g.shadda and not g.silent
            and not g.is_wasl)


def apply_wasl_heuristic(line: ScriptLine) -> ScriptLine:
    """Guess connective alifs on bare alifs in telltale positions.

    A bare alif that starts the line or a word, or follows a vocalized
    letter, and that precedes an explicitly sukun-marked or geminated
    letter, is most likely connective.  The alif of a definite article
    qualifies when its lam is sukun-marked or the letter after the lam
    is geminated.
    """
    words = [list(w) for w in line.words]
    for wi, word in enumerate(words):
        for gi, g in enumerate(word):
            if g.base != ALIF or not _bare(g):
                continue
            if gi == len(word) - 1:
                continue  # word-final alif is orthographic, never connective
            if gi > 0 and not word[gi - 1].vocalized:
                continue
            nxt = word[gi + 1]
            connective = (nxt.vowel == "sukun" and not nxt.shadda) or nxt.shadda
            if not connective and nxt.base == LAM and gi + 2 < len(word):
                connective = word[gi + 2].shadda
            if connective:
                word[gi] = Grapheme(WASL_ALIF, is_wasl=True)
    return ScriptLine(tuple(tuple(w) for w in words), line.verse_final)


def mark_silent_letters(line: ScriptLine,
                        table: SilentWordTable | None = None) -> ScriptLine:
    """Mark the known silent letters with the silence diacritic.

    Covers the masculine-plural waw+alif ending and the table of words
    with a lexically silent letter.
    """
    if table is None:
        table = default_tables().silent
    words = [list(w) for w in line.words]
    for word in words:
        idx = table.silent_index(tuple(word))
        if idx is not None and 0 <= idx < len(word) and _bare(word[idx]):
            word[idx] = dc_replace(word[idx], silent=True)
        if (len(word) >= 3 and word[-1].base == ALIF and _bare(word[-1])
                and word[-2].base == WAW):
            word[-1] = dc_replace(word[-1], silent=True)
    return ScriptLine(tuple(tuple(w) for w in words), line.verse_final)


def apply_lam_kasra(line: ScriptLine) -> ScriptLine:
    """Give a bare word-initial clitic lam its kasra.

    Provisional reading of an ambiguous source rule; toggleable in the
    pipeline config.
    """
    words = [list(w) for w in line.words]
    for word in words:
        if len(word) >= 3 and word[0].base == LAM and _bare(word[0]):
            word[0] = word[0].with_vowel("kasra")
    return ScriptLine(tuple(tuple(w) for w in words), line.verse_final)


def assign_default_sukun(line: ScriptLine) -> ScriptLine:
    """Give sukun to every remaining bare letter.

    Geminated letters without a vowel are left alone so the verification
    scan can flag the line as under-diacritized.
    """
    words = [
        tuple(g.with_vowel("sukun") if _bare(g) else g for g in word)
        for word in line.words
    ]
    return ScriptLine(tuple(words), line.verse_final)


def diacritize_known_words(line: ScriptLine,
                           table: KnownWordTable | None = None) -> ScriptLine:
    """Replace bare/partial words that match an unambiguous-word entry."""
    if table is None:
        table = default_tables().known
    words = []
    for word in line.words:
        for cand in table.candidates(word):
            if scansion.compatible_replacement(word, cand):
                word = cand
                break
        words.append(word)
    return ScriptLine(tuple(words), line.verse_final)


@dataclass
class PipelineConfig:
    min_words: int = 4
    min_ratio: float = 0.5
    known_words: bool = True
    lam_kasra: bool = True
    wasl_heuristic: bool = True
    silent_marking: bool = True
    sukun_defaults: bool = True
    verse_final: bool = False
    tables: TableSet | None = None

    def table_set(self) -> TableSet:
        return self.tables if self.tables is not None else default_tables()


def process_line(raw: str, cfg: PipelineConfig | None = None):
    """Run one raw line through the full pipeline.

    Returns (normalized_text, "ok") on acceptance or (None, reason) on
    rejection; per-line failures never raise.
    """
    if cfg is None:
        cfg = PipelineConfig()
    tables = cfg.table_set()
    cleaned = clean_line(raw)
    if not cleaned:
        return None, REASON_FOREIGN_RESIDUE
    try:
        line = parse_line(cleaned, verse_final=cfg.verse_final)
    except ScriptError:
        return None, REASON_FOREIGN_RESIDUE
    if cfg.known_words:
        line = diacritize_known_words(line, tables.known)
    decision = filter_line(line, cfg.min_words, cfg.min_ratio)
    if not decision.accepted:
        return None, decision.reason
    if cfg.lam_kasra:
        line = apply_lam_kasra(line)
    if cfg.wasl_heuristic:
        line = apply_wasl_heuristic(line)
    if cfg.silent_marking:
        line = mark_silent_letters(line, tables.silent)
    if cfg.sukun_defaults:
        line = assign_default_sukun(line)
    try:
        scansion.scan(line, tables, sentence_initial=True)
    except ScanError as exc:
        return None, _scan_reason(exc)
    return render_line(line), REASON_OK


def _scan_reason(exc: ScanError) -> str:
    name = type(exc).__name__
    return {
        "UnderDiacritized": "under_diacritized",
        "ShaddaWithoutVowel": "under_diacritized",
        "DanglingWasl": "dangling_wasl",
    }.get(name, "scan_error")


@dataclass
class PipelineResult:
    accepted: list
    stats: DiacriticStats
    rejections: list  # (1-based line number, reason)


def run_pipeline(lines, cfg: PipelineConfig | None = None) -> PipelineResult:
    """Batch wrapper over process_line with stats on the accepted output."""
    if cfg is None:
        cfg = PipelineConfig()
    accepted = []
    rejections = []
    stats = DiacriticStats()
    for lineno, raw in enumerate(lines, start=1):
        text, reason = process_line(raw, cfg)
        if text is None:
            rejections.append((lineno, reason))
            continue
        accepted.append(text)
        stats.add_line(parse_line(text))
    return PipelineResult(accepted=accepted, stats=stats,
                          rejections=rejections)
