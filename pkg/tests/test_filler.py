"""Lexicon indexing and rhythm-constrained phrase search."""

import itertools

import pytest

from arud.filler import (
    BeatTrie,
    FillQuery,
    JUNCTURE_SLACK,
    Lexicon,
    _prefix_compatible,
    fill,
    index_lexicon,
    matches_target,
    phrase_beats_in_context,
)
from arud.script import parse_line


class TestIndex:
    def test_prefix_tree_keys(self):
        lex = index_lexicon(["مَا", "لَهُ"])
        assert lex.trie.keys() == {"10", "11"}
        assert len(lex) == 2

    def test_empty_stream(self):
        lex = index_lexicon([])
        assert len(lex) == 0 and lex.trie.keys() == set()

    def test_unscannable_word_skipped(self):
        # geminated letter with no vowel cannot scan
        lex = index_lexicon(["مَا", "بَمّ"])
        assert len(lex) == 1

    def test_duplicates_collapse(self):
        lex = index_lexicon(["مَا", "مَا", "مَا"])
        assert len(lex) == 1

    def test_multi_word_entry_skipped(self):
        lex = index_lexicon(["مَا لَهُ"])
        assert len(lex) == 0


class TestPrefixPruning:
    def test_exact_prefix_within_slack(self):
        assert _prefix_compatible("110", "11010", 2)

    def test_gross_mismatch_rejected(self):
        assert not _prefix_compatible("000000", "111111", 2)

    def test_shifted_by_insertion_still_viable(self):
        # isolated "11"+"11010" vs in-context "110"+"11010": the isba
        # insertion shifts later positions; must not be pruned
        assert _prefix_compatible("1111010", "11011010", 4)

    def test_overlong_rejected(self):
        assert not _prefix_compatible("1" * 10, "11", 2)

    def test_short_partial_always_viable(self):
        assert _prefix_compatible("01", "11010", 2)


class TestFill:
    def test_single_exact_match(self):
        lex = index_lexicon(["مَا"])
        assert fill(FillQuery(target="10"), lex) == ["مَا"]

    def test_juncture_beats_concatenation(self):
        # isolated beats are "11"+"10" = "1110", but in context the
        # pronoun clitic gains its long vowel: target "11010" matches
        lex = index_lexicon(["لَهُ", "مَا", "عَلَّمَ"])
        assert fill(FillQuery(target="11010"), lex) == ["لَهُ مَا"]

    def test_unvocalized_start_unsatisfiable(self):
        lex = index_lexicon(["لَهُ", "مَا", "عَلَّمَ"])
        assert fill(FillQuery(target="01"), lex) == []

    def test_verse_final_extension(self):
        # target needs the verse-final long vowel after the last fatha
        lex = index_lexicon(["قَتَلَ"])
        assert fill(FillQuery(target="1110", verse_final=True), lex) == \
            ["قَتَلَ"]
        assert fill(FillQuery(target="1110"), lex) == []

    def test_left_context_juncture(self):
        # after لَهُ the candidate مَا completes the isba pattern
        lex = index_lexicon(["مَا", "عَلَّمَ"])
        out = fill(FillQuery(target="10", left_context="لَهُ"), lex)
        assert out == ["مَا"]

    def test_max_results_truncates(self):
        lex = index_lexicon(["مَا", "لَا", "يَا"])
        out = fill(FillQuery(target="10", max_results=2), lex)
        assert len(out) == 2
        assert out == sorted(out)

    def test_invalid_target(self):
        with pytest.raises(ValueError):
            FillQuery(target="102")
        with pytest.raises(ValueError):
            FillQuery(target="")


def brute_force(query, surfaces, tables=None):
    """Oracle: enumerate every phrase up to max_words, rescan in context."""
    left = parse_line(query.left_context).words \
        if query.left_context.strip() else ()
    right = parse_line(query.right_context).words \
        if query.right_context.strip() else ()
    words = {s: parse_line(s).words[0] for s in surfaces}
    found = set()
    for n in range(1, query.max_words + 1):
        for combo in itertools.product(sorted(words), repeat=n):
            phrase = [words[s] for s in combo]
            if matches_target(phrase, left, right, query, tables):
                found.add(" ".join(combo))
    return sorted(found)[:query.max_results]


class TestBoundedCompleteness:
    LEXICON = ["مَا", "لَهُ", "عَلَّمَ", "مَعًا", "مِنْ", "قَدْ", "لَا",
               "قَتَلَ"]

    @pytest.mark.parametrize("target", ["10", "11010", "1011", "110110",
                                        "101010", "01"])
    def test_matches_brute_force(self, target):
        lex = index_lexicon(self.LEXICON)
        query = FillQuery(target=target, max_words=2)
        assert fill(query, lex) == brute_force(query, self.LEXICON)

    def test_with_context(self):
        lex = index_lexicon(self.LEXICON)
        query = FillQuery(target="1010", left_context="عَلَّمَ",
                          right_context="مَعًا", max_words=2)
        assert fill(query, lex) == brute_force(query, self.LEXICON)


class TestSoundness:
    def test_results_rescan_to_target(self):
        lex = index_lexicon(TestBoundedCompleteness.LEXICON)
        query = FillQuery(target="110110", max_words=2)
        for phrase in fill(query, lex):
            words = parse_line(phrase).words
            assert matches_target(list(words), (), (), query)
