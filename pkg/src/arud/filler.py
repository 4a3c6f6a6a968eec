"""Rhythm-constrained gap filling from a lexicon.

A non-neural oracle for the substitution task: search the lexicon for
word sequences whose in-context beat pattern equals a target.  Isolated
per-word patterns only prune the search; the decision procedure is
always a full rescan of left context + candidate phrase + right context,
because juncture effects (long-vowel restoration, connective alifs)
make naive beat concatenation unsound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import ScriptError
from .scansion import beat_segments, scan
from .script import ScriptLine, Word, parse_line
from .tables import TableSet

log = logging.getLogger(__name__)

# Juncture effects change at most this many beats at a word boundary,
# so prefix pruning leaves this much slack per boundary.
JUNCTURE_SLACK = 2


@dataclass(frozen=True)
class LexiconEntry:
    surface: str
    word: Word
    isolated_beats: str


class BeatTrie:
    """Prefix tree over isolated beat patterns."""

    __slots__ = ("children", "entries")

    def __init__(self):
        self.children: dict = {}
        self.entries: list = []

    def insert(self, entry: LexiconEntry) -> None:
        node = self
        for ch in entry.isolated_beats:
            node = node.children.setdefault(ch, BeatTrie())
        node.entries.append(entry)

    def keys(self) -> set:
        """All complete beat patterns stored in the tree."""
        out = set()

        def walk(node, path):
            if node.entries:
                out.add(path)
            for ch, child in node.children.items():
                walk(child, path + ch)

        walk(self, "")
        return out


@dataclass
class Lexicon:
    trie: BeatTrie = field(default_factory=BeatTrie)
    size: int = 0

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class FillQuery:
    target: str
    left_context: str = ""
    right_context: str = ""
    max_words: int = 3
    max_results: int = 100
    verse_final: bool = False

    def __post_init__(self):
        if not self.target or set(self.target) - {"0", "1"}:
            raise ValueError("target must be a non-empty string over {0,1}")
        if self.max_words < 1 or self.max_results < 1:
            raise ValueError("limits must be positive")


def index_lexicon(words, tables: TableSet | None = None) -> Lexicon:
    """Scan each word in isolation and group by beat-pattern prefix.

    Duplicates collapse; unscannable words are logged and skipped.
    """
    seen = {}
    for surface in words:
        surface = surface.strip()
        if not surface or surface in seen:
            continue
        try:
            line = parse_line(surface)
            if len(line.words) != 1:
                raise ValueError("lexicon entries must be single words")
            _, beats = scan(line, tables, sentence_initial=False)
        except (ScriptError, ValueError) as exc:
            log.warning("lexicon word %r skipped: %s", surface, exc)
            continue
        seen[surface] = LexiconEntry(surface=surface, word=line.words[0],
                                     isolated_beats=beats)
    lexicon = Lexicon()
    for entry in sorted(seen.values(), key=lambda e: e.surface):
        lexicon.trie.insert(entry)
        lexicon.size += 1
    return lexicon


def _prefix_compatible(partial: str, target: str, slack: int) -> bool:
    """Admissible check: partial must be within `slack` edits of some
    target prefix.

    Juncture effects insert or delete beats (isba adds one, connective
    alifs remove up to two), so the isolated concatenation can shift
    against the true in-context pattern; plain positional prefix
    matching would wrongly prune such phrases.
    """
    if len(partial) > len(target) + slack:
        return False
    # one DP row of edit distance partial -> prefixes of target
    previous = list(range(len(target) + 1))
    for i, ch in enumerate(partial, start=1):
        current = [i]
        for j, tch in enumerate(target, start=1):
            current.append(min(previous[j] + 1, current[j - 1] + 1,
                               previous[j - 1] + (ch != tch)))
        previous = current
    return min(previous) <= slack


def _trie_candidates(trie: BeatTrie, partial: str, target: str,
                     slack: int) -> list:
    """Entries whose isolated beats keep the combined prefix viable."""
    found = []

    def walk(node, path):
        if not _prefix_compatible(partial + path, target, slack):
            return
        found.extend(node.entries)
        for ch in ("0", "1"):
            child = node.children.get(ch)
            if child is not None:
                walk(child, path + ch)

    walk(trie, "")
    return found


def phrase_beats_in_context(
    phrase_words,
    left_words,
    right_words,
    verse_final: bool,
    tables: TableSet | None = None,
    optional_plural_m: bool = False,
) -> str | None:
    """Beat contribution of the phrase inside the full assembly.

    Returns None when the assembly does not scan or word alignment is
    lost by the transformation.
    """
    words = tuple(left_words) + tuple(phrase_words) + tuple(right_words)
    line = ScriptLine(words=words, verse_final=verse_final)
    try:
        scansion_line, _ = scan(line, tables, sentence_initial=True,
                                optional_plural_m=optional_plural_m)
    except ScriptError:
        return None
    if len(scansion_line.words) != len(words):
        return None
    segments = beat_segments(scansion_line)
    lo = len(left_words)
    return "".join(segments[lo:lo + len(phrase_words)])


def matches_target(phrase_words, left_words, right_words, query: FillQuery,
                   tables: TableSet | None = None) -> bool:
    """Full-rescan decision, exploring optional plural-m as a branch."""
    verse_final = query.verse_final and not right_words
    for optional in (False, True):
        beats = phrase_beats_in_context(
            phrase_words, left_words, right_words, verse_final,
            tables, optional_plural_m=optional)
        if beats == query.target:
            return True
    return False


def fill(query: FillQuery, lexicon: Lexicon,
         tables: TableSet | None = None) -> list:
    """All lexicon phrases whose in-context pattern equals the target.

    Results are deduplicated and ordered lexicographically by surface;
    an unsatisfiable target yields an empty list.
    """
    left_words = parse_line(query.left_context).words \
        if query.left_context.strip() else ()
    right_words = parse_line(query.right_context).words \
        if query.right_context.strip() else ()

    results = set()

    def descend(chosen, partial):
        if chosen:
            phrase = [e.word for e in chosen]
            if matches_target(phrase, left_words, right_words, query, tables):
                results.add(" ".join(e.surface for e in chosen))
        if len(chosen) >= query.max_words:
            return
        slack = JUNCTURE_SLACK * (len(chosen) + 1)
        for entry in _trie_candidates(lexicon.trie, partial, query.target,
                                      slack):
            descend(chosen + [entry], partial + entry.isolated_beats)

    descend([], "")
    return sorted(results)[:query.max_results]
