"""Prosody engine and dataset toolkit for classical Arabic verse."""

from .errors import (
    DanglingWasl,
    DoubleDiacritic,
    EmptyEvaluation,
    EmptyHemistich,
    EmptyLine,
    EmptyWord,
    ForeignCharacter,
    LeadingDiacritic,
    LineTooShort,
    ParseError,
    ScanError,
    ScriptError,
    ShaddaWithoutVowel,
    UnderDiacritized,
)
from .scansion import scan, scan_text
from .script import (
    Grapheme,
    ScriptLine,
    fix_diacritic_order,
    parse_line,
    render_line,
    word_diacritization_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "DanglingWasl", "DoubleDiacritic", "EmptyEvaluation", "EmptyHemistich",
    "EmptyLine", "EmptyWord", "ForeignCharacter", "Grapheme",
    "LeadingDiacritic", "LineTooShort", "ParseError", "ScanError",
    "ScriptError", "ScriptLine", "ShaddaWithoutVowel", "UnderDiacritized",
    "fix_diacritic_order", "parse_line", "render_line", "scan", "scan_text",
    "word_diacritization_ratio", "__version__",
]
