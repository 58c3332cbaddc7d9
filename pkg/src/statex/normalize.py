"""Character-level canonicalization of raw scientific text.

The same statistical result can reach us in many visual disguises: Greek
letters in half a dozen Unicode blocks, superscript digits, HTML entities
and ``<sup>`` markup, exotic comparison glyphs, bracketed degrees of
freedom, and whitespace damage from PDF extraction.  This module folds all
of them onto one canonical ASCII representation so the extraction grammar
only ever sees a single spelling per visual form.

Every transformation keeps an offset map back to the raw input, so spans
found in canonical text can be reported against the original document.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from typing import Callable

# Chi spellings that must collapse onto the canonical "chi2" token.  The
# Unicode standard scatters chi over the Greek block and five mathematical
# style variants (bold, italic, bold italic, sans bold, sans bold italic),
# each in both cases.  The table is explicit rather than derived so it can
# be unit-tested character by character.
_CHI_LETTERS = (
    "χ"  # greek small letter chi
    "Χ"  # greek capital letter chi
    "\U0001d6be\U0001d6d8"  # mathematical bold capital/small
    "\U0001d6f8\U0001d712"  # mathematical italic capital/small
    "\U0001d732\U0001d74c"  # mathematical bold italic capital/small
    "\U0001d76c\U0001d786"  # mathematical sans-serif bold capital/small
    "\U0001d7a6\U0001d7c0"  # mathematical sans-serif bold italic capital/small
)

# Single-character folds applied before token-level rules.
_CHAR_FOLDS = {
    "²": "2",   # superscript two
    "≤": "<=",  # less-than or equal to
    "⩽": "<=",  # less-than or slanted equal to
    "≦": "<=",  # less-than over equal to
    "≥": ">=",  # greater-than or equal to
    "⩾": ">=",  # greater-than or slanted equal to
    "≧": ">=",  # greater-than over equal to
    "−": "-",   # minus sign
    "’": "'",   # right single quotation mark (plural markers)
    "β": "beta",  # greek small letter beta
}

_ENTITY_RE = re.compile(r"&(?:#\d{1,7}|#[xX][0-9a-fA-F]{1,6}|[A-Za-z][A-Za-z0-9]{1,31});")
_SUP2_RE = re.compile(r"<sup>\s*2\s*</sup>", re.IGNORECASE)
_CHAR_FOLD_RE = re.compile("[%s]" % "".join(_CHAR_FOLDS))
# "chi" as a Greek letter or a spelled-out word, with or without a squared
# mark, becomes the 4-character ASCII token "chi2".  Word boundaries keep
# "children" and "matching" intact; "chi2" itself refolds onto itself, which
# makes the whole pipeline idempotent.
_CHI_RE = re.compile(
    r"(?<![A-Za-z0-9])(?:[%s]|[Cc][Hh][Ii])(?:\^?2)?(?![A-Za-z0-9])" % _CHI_LETTERS
)
# Squared brackets around a numeric degrees-of-freedom group.
_DF_BRACKET_RE = re.compile(r"\[[ ]*(\d[\d.,\s]*?)[ ]*\]")
_WS_RE = re.compile(r"[\s ]+")

# PDF-to-text conversion artifacts.  Both repairs are deliberately narrow:
# a statistic head (label plus df group) that runs directly into a number
# with no comparator, and the digit 5 standing in for "=" after a p.
_MISSING_COMP_RE = re.compile(
    r"(?<![A-Za-z0-9_])"
    r"((?:chi2|[A-Za-z](?:\^2|2)?)(?:'s)?\([^()]{1,24}\)) +"
    r"(?=[-+]?(?:\d|\.\d))"
)
_P_DIGIT_COMP_RE = re.compile(r"(?<![A-Za-z0-9_])(p(?:'s)?) 5 (?=[-+]?(?:\d|\.\d))")


@dataclass(frozen=True)
class NormalizedText:
    """Canonical text plus a map from canonical indices to raw indices.

    ``offset_map[i]`` is the index in the raw input that canonical
    character ``i`` was derived from; it is total and non-decreasing.
    """

    text: str
    offset_map: tuple[int, ...]
    raw: str = field(default="", compare=False)

    def raw_span(self, start: int, end: int) -> tuple[int, int]:
        """Translate a canonical [start, end) span to raw offsets."""
        if start >= end:
            raw_at = self.offset_map[start] if start < len(self.offset_map) else len(self.raw)
            return raw_at, raw_at
        return self.offset_map[start], self.offset_map[end - 1] + 1


def _apply(
    text: str, pattern: re.Pattern[str], repl: Callable[[re.Match[str]], str]
) -> tuple[str, list[int]]:
    """Run one regex rewrite, returning new text and a map into ``text``."""
    out: list[str] = []
    omap: list[int] = []
    pos = 0
    for m in pattern.finditer(text):
        for i in range(pos, m.start()):
            out.append(text[i])
            omap.append(i)
        replacement = repl(m)
        width = m.end() - m.start()
        for j, ch in enumerate(replacement):
            out.append(ch)
            # Spread replacement characters over the source span so equal-
            # length folds keep exact positions.
            omap.append(m.start() + min(j, width - 1))
        pos = m.end()
    for i in range(pos, len(text)):
        out.append(text[i])
        omap.append(i)
    return "".join(out), omap


def _compose(outer: list[int] | tuple[int, ...], inner: list[int]) -> list[int]:
    return [outer[i] for i in inner]


def _decode_entity(m: re.Match[str]) -> str:
    decoded = html.unescape(m.group(0))
    return decoded if decoded != m.group(0) else m.group(0)


_PASSES: list[tuple[str, re.Pattern[str], Callable[[re.Match[str]], str]]] = [
    ("entities", _ENTITY_RE, _decode_entity),
    ("sup_markup", _SUP2_RE, lambda m: "2"),
    ("char_folds", _CHAR_FOLD_RE, lambda m: _CHAR_FOLDS[m.group(0)]),
    ("chi", _CHI_RE, lambda m: "chi2"),
    ("df_brackets", _DF_BRACKET_RE, lambda m: "(%s)" % m.group(1)),
    ("whitespace", _WS_RE, lambda m: " "),
]


def _normalize(raw: str, skip: frozenset[str] = frozenset()) -> NormalizedText:
    text = raw
    omap: list[int] = list(range(len(raw)))
    for name, pattern, repl in _PASSES:
        if name in skip:
            continue
        text, inner = _apply(text, pattern, repl)
        omap = _compose(omap, inner)
    return NormalizedText(text=text, offset_map=tuple(omap), raw=raw)


def normalize_text(raw: str) -> NormalizedText:
    """Canonicalize ``raw`` text; total, idempotent, never raises.

    Greek chi in any style becomes ``chi2``, superscript and markup twos
    become ASCII ``2``, comparison glyphs become ``<=``/``>=``, bracketed
    df groups become parenthesized, and whitespace runs collapse to a
    single space.  Unmappable characters pass through unchanged.
    """
    return _normalize(raw)


def repair_pdf_artifacts(normalized: NormalizedText) -> NormalizedText:
    """Repair the two documented PDF compilation artifacts.

    A missing comparator between a statistic head and its value becomes the
    indeterminate token ``<=>``; a lone ``5`` standing where the comparator
    of a p clause must appear becomes ``=``.  Text without a candidate
    result window passes through unchanged.
    """
    text, inner = _apply(normalized.text, _MISSING_COMP_RE, lambda m: m.group(1) + "<=>")
    omap = _compose(normalized.offset_map, inner)
    text, inner = _apply(text, _P_DIGIT_COMP_RE, lambda m: m.group(1) + "=")
    omap = _compose(omap, inner)
    return NormalizedText(text=text, offset_map=tuple(omap), raw=normalized.raw)
