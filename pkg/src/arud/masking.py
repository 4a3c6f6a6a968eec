"""Substitution-task training example generation.

Samples a contiguous word span, embeds the span's in-context beat
pattern between markers, reduces the context diacritics to mimic
real-world partially diacritized text, and emits (input, target)
records.  Output is a pure function of (corpus, config): every line
gets its own random stream derived from the seed and line index.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass

from .errors import LineTooShort, ScanError, ScriptError
from .scansion import beat_segments, scan
from .script import ALIF, ARABIC_LETTERS, MARKS, Grapheme, ScriptLine, \
    parse_line, render_word
from .tables import TableSet

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _check_marker(marker: str) -> None:
    if not marker:
        raise ValueError("markers must be non-empty")
    if any(ch in ARABIC_LETTERS or ch in MARKS for ch in marker):
        raise ValueError(f"marker {marker!r} contains Arabic characters")


@dataclass(frozen=True)
class MaskConfig:
    span_p: float = 0.2
    keep_p: float = 0.2
    sukun_drop: float = 0.5
    markers: tuple = ("[E0]", "[E1]", "[E2]")
    seed: int = 0
    per_line: int = 1
    reduce_context: bool = True

    def __post_init__(self):
        for name in ("span_p", "keep_p", "sukun_drop"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {p}")
        if len(self.markers) != 3 or len(set(self.markers)) != 3:
            raise ValueError("three pairwise distinct markers required")
        for marker in self.markers:
            _check_marker(marker)
        if self.per_line < 1:
            raise ValueError("per_line must be positive")


@dataclass(frozen=True)
class MaskedExample:
    input: str
    target: str
    beats: str
    span: tuple  # (start word index, length)

    def to_json(self) -> str:
        return json.dumps(
            {"v": SCHEMA_VERSION, "input": self.input, "target": self.target,
             "beats": self.beats, "span": list(self.span)},
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, text: str) -> "MaskedExample":
        obj = json.loads(text)
        return cls(input=obj["input"], target=obj["target"],
                   beats=obj["beats"], span=tuple(obj["span"]))


def geometric(rng: random.Random, p: float) -> int:
    """Geometric draw on support {0, 1, 2, ...} with success probability p."""
    u = rng.random()
    if u >= 1.0 - 1e-15:
        return 0
    return int(math.log1p(-u) / math.log1p(-p))


def sample_mask_span(line: ScriptLine, cfg: MaskConfig,
                     rng: random.Random) -> tuple:
    """Contiguous span: geometric length clamped so context survives."""
    n = line.word_count()
    if n < 2:
        raise LineTooShort("need at least two words to mask a span")
    length = min(1 + geometric(rng, cfg.span_p), n - 1)
    start = rng.randrange(0, n - length + 1)
    return start, length


def reduce_context_diacritics(context: ScriptLine, cfg: MaskConfig,
                              rng: random.Random) -> ScriptLine:
    """Thin out context marks to mimic typical diacritization habits.

    Silence marks always go (the letter stays), connective alifs become
    plain alifs, each sukun independently survives with probability
    1 - sukun_drop, and each word keeps a geometric number of its other
    marks (shadda included), chosen uniformly.
    """
    words = []
    for word in context.words:
        letters = []
        for g in word:
            if g.silent:
                g = Grapheme(g.base)
            if g.is_wasl:
                g = Grapheme(ALIF)
            if g.vowel == "sukun" and rng.random() < cfg.sukun_drop:
                g = g.with_vowel(None)
            letters.append(g)
        # pool of non-sukun marks in this word: (index, kind) slots
        slots = []
        for i, g in enumerate(letters):
            if g.vowel is not None and g.vowel != "sukun":
                slots.append((i, "vowel"))
            if g.shadda:
                slots.append((i, "shadda"))
        keep = min(geometric(rng, cfg.keep_p), len(slots))
        kept = set(rng.sample(range(len(slots)), keep)) if slots else set()
        for si, (i, kind) in enumerate(slots):
            if si in kept:
                continue
            g = letters[i]
            if kind == "vowel":
                letters[i] = g.with_vowel(None)
            else:
                letters[i] = Grapheme(g.base, vowel=g.vowel, silent=g.silent,
                                      is_wasl=g.is_wasl)
        words.append(tuple(letters))
    return ScriptLine(tuple(words), context.verse_final)


def build_training_example(
    line: ScriptLine,
    cfg: MaskConfig,
    rng: random.Random,
    tables: TableSet | None = None,
) -> MaskedExample:
    """One (input, target) record for a scan-ready line."""
    start, length = sample_mask_span(line, cfg, rng)
    scansion_line, _ = scan(line, tables, sentence_initial=True)
    if len(scansion_line.words) != len(line.words):
        raise ScanError("word alignment lost during transformation")
    segments = beat_segments(scansion_line)
    beats = "".join(segments[start:start + length])
    target = " ".join(render_word(w) for w in line.words[start:start + length])

    left_words = line.words[:start]
    right_words = line.words[start + length:]
    if cfg.reduce_context:
        if left_words:
            left_words = reduce_context_diacritics(
                ScriptLine(left_words), cfg, rng).words
        if right_words:
            right_words = reduce_context_diacritics(
                ScriptLine(right_words), cfg, rng).words
    e0, e1, e2 = cfg.markers
    parts = []
    if left_words:
        parts.append(" ".join(render_word(w) for w in left_words))
        parts.append(" ")
    parts.append(e0)
    parts.append(beats)
    parts.append(e1)
    if right_words:
        parts.append(" ")
        parts.append(" ".join(render_word(w) for w in right_words))
    parts.append(e2)
    return MaskedExample(input="".join(parts), target=target, beats=beats,
                         span=(start, length))


def line_rng(seed: int, line_index: int, repeat: int = 0) -> random.Random:
    """Per-line random stream, independent of processing order."""
    return random.Random(f"{seed}:{line_index}:{repeat}")


def generate_dataset(lines, cfg: MaskConfig, tables: TableSet | None = None):
    """Yield (line_index, example) records; unbuildable lines are skipped.

    `lines` may hold ScriptLine values or raw text.
    """
    for index, item in enumerate(lines):
        if isinstance(item, ScriptLine):
            line = item
        else:
            try:
                line = parse_line(item)
            except ScriptError as exc:
                log.warning("line %d unparseable, skipped: %s", index, exc)
                continue
        for repeat in range(cfg.per_line):
            rng = line_rng(cfg.seed, index, repeat)
            try:
                example = build_training_example(line, cfg, rng, tables)
            except ScriptError as exc:
                log.warning("line %d skipped: %s", index, exc)
                break
            yield index, example
