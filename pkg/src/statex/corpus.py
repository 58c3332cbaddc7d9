"""Embedded conformance corpus and reporting-style mutation fuzzer.

The corpus holds 187 short result strings spanning canonical reports, a
3x52 sweep of statistic labels (bare, with an appended 2, and with a caret
exponent), and the catalogue of reporting styles and typos a robust
extractor must survive.  Expected extraction fields are transcribed from
the documented ground-truth output table at its printed 2-decimal
precision; recomputed p-values are compared at +-0.005.

The fuzzer produces deterministic single-edit variants modeling manual
transcription errors: digits substituted, omitted, or added, statistic and
p values swapped, and corrupted separators or comparison operators.
"""

from __future__ import annotations

import hashlib
import json
import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

from .check import CheckOptions
from .extract import extract_results
from .normalize import normalize_text, repair_pdf_artifacts
from .pipeline import Analysis, analyze_text, wide_fields

_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_LETTERS = _UPPER + _UPPER.lower()

# Tolerance for comparing expected values printed at two decimals.
VALUE_TOLERANCE = 0.005


class CorruptCorpus(RuntimeError):
    """The embedded corpus no longer matches its frozen checksum."""


class NotMutable(ValueError):
    """The input lacks the element this mutation kind requires."""


@dataclass(frozen=True)
class CorpusCase:
    """One conformance case: input string plus expected extraction fields."""

    id: int
    input: str
    expected: dict[str, float | str] = field(default_factory=dict)
    has_p_clause: bool = True
    lenient: bool = False


def _sweep_expected(extra: dict[str, float | str] | None) -> dict[str, float | str]:
    expected: dict[str, float | str] = {"p_op": "<", "p": 0.05}
    if extra:
        expected.update(extra)
    return expected


# Ground-truth extraction for the bare-letter sweep; letters absent from
# the table extract only their p clause.
_SWEEP_BARE: dict[str, dict[str, float | str]] = {
    "t": {"t_op": "=", "t": 0.3, "df2": 12.0, "recalculatedP": 0.77},
    "r": {"r_op": "=", "r": 0.3, "df2": 12.0, "recalculatedP": 0.30},
    "Z": {"Z_op": "=", "Z": 0.3, "recalculatedP": 0.76},
    "z": {"Z_op": "=", "Z": 0.3, "recalculatedP": 0.76},
    "Q": {"Q_op": "=", "Q": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "q": {"Q_op": "=", "Q": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "H": {"H_op": "=", "H": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "U": {"U_op": "=", "U": 0.3},
    "X": {"Chi2": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "x": {"Chi2": 0.3, "df1": 12.0, "recalculatedP": 1.0},
}

# Ground truth for the letter-2 and letter-caret-2 sweeps (identical).
_SWEEP_SQUARED: dict[str, dict[str, float | str]] = {
    "G": {"G2_op": "=", "G2": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "H": {"H_op": "=", "H": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "Q": {"Q_op": "=", "Q": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "R": {"R2_op": "=", "R2": 0.3},
    "r": {"R2_op": "=", "R2": 0.3},
    "t": {"t_op": "=", "t": 0.3, "df2": 12.0, "recalculatedP": 0.77},
    "X": {"Chi2": 0.3, "df1": 12.0, "recalculatedP": 1.0},
    "x": {"Chi2": 0.3, "df1": 12.0, "recalculatedP": 1.0},
}

_LENIENT_IDS = frozenset({31, 33, 83, 135})


def _build_cases() -> list[CorpusCase]:
    cases: list[CorpusCase] = []

    def add(
        case_id: int,
        text: str,
        expected: dict[str, float | str],
        has_p_clause: bool = True,
    ) -> None:
        cases.append(
            CorpusCase(
                id=case_id,
                input=text,
                expected=expected,
                has_p_clause=has_p_clause,
                lenient=case_id in _LENIENT_IDS,
            )
        )

    add(1, "t(12)=2.3, p<.05",
        {"t_op": "=", "t": 2.3, "df2": 12.0, "p_op": "<", "p": 0.05, "recalculatedP": 0.04})
    add(2, "F(1,23)=4.5, p=.23",
        {"F_op": "=", "F": 4.5, "df1": 1.0, "df2": 23.0, "p_op": "=", "p": 0.23,
         "recalculatedP": 0.04})
    add(3, "r(12)=.34, p=.56",
        {"r_op": "=", "r": 0.34, "df2": 12.0, "p_op": "=", "p": 0.56, "recalculatedP": 0.23})
    add(4, "Z=1.2, p<.34",
        {"Z_op": "=", "Z": 1.2, "p_op": "<", "p": 0.34, "recalculatedP": 0.23})
    chi_expected: dict[str, float | str] = {
        "Chi2": 3.4, "df1": 12.0, "p_op": "<", "p": 0.05, "recalculatedP": 0.99}
    add(5, "χ^2(12)=3.4, p<.05", dict(chi_expected))
    add(6, "χ2(12)=3.4, p<.05", dict(chi_expected))
    add(7, "Chi^2(12)=3.4, p<.05", dict(chi_expected))
    add(8, "chi2(12)=3.4, p<.05", dict(chi_expected))
    add(9, "Q(12)=3.4, p<.01",
        {"Q_op": "=", "Q": 3.4, "df1": 12.0, "p_op": "<", "p": 0.01, "recalculatedP": 0.99})
    add(10, "t(12)=.34, n.s.",
        {"t_op": "=", "t": 0.34, "df2": 12.0, "p_op": "ns", "recalculatedP": 0.74},
        has_p_clause=False)

    for offset, letter in enumerate(_LETTERS):
        add(11 + offset, "%s(12)=.3, p<.05" % letter,
            _sweep_expected(_SWEEP_BARE.get(letter)))
    for offset, letter in enumerate(_LETTERS):
        add(63 + offset, "%s2(12)=.3, p<.05" % letter,
            _sweep_expected(_SWEEP_SQUARED.get(letter)))
    for offset, letter in enumerate(_LETTERS):
        add(115 + offset, "%s^2(12)=.3, p<.05" % letter,
            _sweep_expected(_SWEEP_SQUARED.get(letter)))

    chi_expected_34 = dict(chi_expected)
    add(167, "χ²(12)=3.4, p<.05", chi_expected_34)
    add(168, "χ<sup>2</sup>(12)=3.4, p<.05", dict(chi_expected_34))
    add(169, "t=.12, p=.34", {"t_op": "=", "t": 0.12, "p_op": "=", "p": 0.34})
    add(170, "p=.12", {"p_op": "=", "p": 0.12})
    add(171, "t(12)=1.2, d=3.4, p=.56",
        {"t_op": "=", "t": 1.2, "d": 3.4, "df2": 12.0, "p_op": "=", "p": 0.56,
         "recalculatedP": 0.25})
    add(172, "t(12)=1.2; p=.34",
        {"t_op": "=", "t": 1.2, "df2": 12.0, "p_op": "=", "p": 0.34, "recalculatedP": 0.25})
    add(173, "t(12)=1.2 p=.34",
        {"t_op": "=", "t": 1.2, "df2": 12.0, "p_op": "=", "p": 0.34, "recalculatedP": 0.25})
    add(174, "t=1.2, df=34, p=.56",
        {"t_op": "=", "t": 1.2, "df2": 34.0, "p_op": "=", "p": 0.56, "recalculatedP": 0.24})
    add(175, "t(12)=1.2^3, p=4/5",
        {"t_op": "=", "t": 1.73, "df2": 12.0, "p_op": "=", "p": 0.8, "recalculatedP": 0.11})
    add(176, "t(12)=1..2, p=.n3",
        {"t_op": "=", "t": 1.0, "df2": 12.0, "p_op": "=", "recalculatedP": 0.34},
        has_p_clause=True)
    add(177, "t index(12)=1.2, p=.34",
        {"t_op": "=", "t": 1.2, "df2": 12.0, "p_op": "=", "p": 0.34, "recalculatedP": 0.25})
    add(178, "r(12)=1.2, p=3.45, R2=6.7",
        {"r_op": "=", "r": 1.2, "R2_op": "=", "R2": 6.7, "df2": 12.0,
         "p_op": "=", "p": 3.45})
    add(179, "beta=1.2, SE=.34, p<.05",
        {"beta": 1.2, "SEbeta": 0.34, "Zest": 3.53, "p_op": "<", "p": 0.05,
         "recalculatedP": 0.0})
    add(180, "t(12)=1.2, p=5%",
        {"t_op": "=", "t": 1.2, "df2": 12.0, "p_op": "=", "p": 0.05, "recalculatedP": 0.25})
    add(181, "all t's(12)>1.2, p's>.05",
        {"t_op": ">", "t": 1.2, "df2": 12.0, "p_op": ">", "p": 0.05, "recalculatedP": 0.25})
    add(182, "t(12)≤1.2, p≥.05",
        {"t_op": "<=", "t": 1.2, "df2": 12.0, "p_op": ">=", "p": 0.05, "recalculatedP": 0.25})
    add(183, "t[12]=1.2, p<.05",
        {"t_op": "=", "t": 1.2, "df2": 12.0, "p_op": "<", "p": 0.05, "recalculatedP": 0.25})
    add(184, "t(1,234)=5.6, p<.05",
        {"t_op": "=", "t": 5.6, "df2": 1234.0, "p_op": "<", "p": 0.05, "recalculatedP": 0.0})
    add(185, "t(12)=1.2,  p<.05",
        {"t_op": "=", "t": 1.2, "df2": 12.0, "p_op": "<", "p": 0.05, "recalculatedP": 0.25})
    add(186, "t(12)=.34, n. s.",
        {"t_op": "=", "t": 0.34, "df2": 12.0, "p_op": "ns", "recalculatedP": 0.74},
        has_p_clause=False)
    add(187, "t(12) 1.2, p 5 .34",
        {"t_op": "<=>", "t": 1.2, "df2": 12.0, "p_op": "=", "p": 0.34, "recalculatedP": 0.25})
    return cases


def _checksum(cases: Sequence[CorpusCase]) -> str:
    payload = json.dumps(
        [
            {
                "id": c.id,
                "input": c.input,
                "expected": {k: c.expected[k] for k in sorted(c.expected)},
                "has_p_clause": c.has_p_clause,
                "lenient": c.lenient,
            }
            for c in cases
        ],
        ensure_ascii=True,
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("ascii")).hexdigest()


_CASES = _build_cases()
_CORPUS_SHA256 = "87d540bb3dc29ceaece26fa644431fc10baff969ef39ea1676589d31eb3affc8"


def load_corpus() -> list[CorpusCase]:
    """Return the embedded 187-case corpus, verifying its checksum."""
    if _checksum(_CASES) != _CORPUS_SHA256:
        raise CorruptCorpus("embedded corpus failed checksum verification")
    return list(_CASES)


@dataclass(frozen=True)
class CaseDiff:
    """One field-level disagreement for a corpus case."""

    case_id: int
    field: str
    expected: float | str | None
    actual: float | str | None
    lenient: bool = False


@dataclass
class ConformanceReport:
    """Aggregate outcome of running a pipeline over the corpus."""

    total: int
    detected: int
    p_expected: int
    p_detected: int
    recalc_expected: int
    recalc_matches: int
    failures: list[CaseDiff]
    lenient_diffs: list[CaseDiff]

    @property
    def passed(self) -> bool:
        return (
            self.detected == self.total
            and self.p_detected == self.p_expected
            and self.recalc_matches == self.recalc_expected
            and not self.failures
        )

    def summary(self) -> str:
        return "%d/%d detected / %d/%d p-clauses / %d/%d recalculated / %s" % (
            self.detected, self.total,
            self.p_detected, self.p_expected,
            self.recalc_matches, self.recalc_expected,
            "pass" if self.passed else "FAIL (%d diffs)" % len(self.failures),
        )


def _values_match(expected: float | str, actual: float | str) -> bool:
    if isinstance(expected, str) or isinstance(actual, str):
        return expected == actual
    return abs(float(expected) - float(actual)) <= VALUE_TOLERANCE


def _diff_case(case: CorpusCase, analyses: list[Analysis]) -> list[CaseDiff]:
    diffs: list[CaseDiff] = []
    view: dict[str, float | str] = {}
    if analyses:
        view = wide_fields(analyses[0])
        if len(analyses) > 1:
            diffs.append(CaseDiff(case.id, "result_count", 1, len(analyses), case.lenient))
    for key in sorted(set(case.expected) | set(view)):
        expected = case.expected.get(key)
        actual = view.get(key)
        if expected is None or actual is None:
            if expected != actual:
                diffs.append(CaseDiff(case.id, key, expected, actual, case.lenient))
        elif not _values_match(expected, actual):
            diffs.append(CaseDiff(case.id, key, expected, actual, case.lenient))
    return diffs


def run_conformance(
    pipeline: Callable[[str], list[Analysis]] | None = None,
    cases: Sequence[CorpusCase] | None = None,
    opts: CheckOptions = CheckOptions(),
) -> ConformanceReport:
    """Run a pipeline over the corpus and score it against expectations."""
    if pipeline is None:
        pipeline = lambda text: analyze_text(text, opts)  # noqa: E731
    if cases is None:
        cases = load_corpus()
    detected = 0
    p_expected = p_detected = 0
    recalc_expected = recalc_matches = 0
    failures: list[CaseDiff] = []
    lenient_diffs: list[CaseDiff] = []
    # Cases run independently; the report is assembled in id order.
    if cases:
        with ThreadPoolExecutor(max_workers=min(8, len(cases))) as pool:
            outcomes = list(pool.map(lambda c: pipeline(c.input), cases))
    else:
        outcomes = []
    for case, analyses in zip(cases, outcomes):
        view = wide_fields(analyses[0]) if analyses else {}
        if analyses:
            detected += 1
        else:
            failures.append(CaseDiff(case.id, "detected", "result", None, case.lenient))
        if "p" in case.expected:
            p_expected += 1
            actual_p = view.get("p")
            if actual_p is not None and not isinstance(actual_p, str) and (
                abs(actual_p - float(case.expected["p"])) <= 1e-9
            ):
                p_detected += 1
        if "recalculatedP" in case.expected and not case.lenient:
            recalc_expected += 1
            actual_recalc = view.get("recalculatedP")
            if actual_recalc is not None and not isinstance(actual_recalc, str) and (
                abs(actual_recalc - float(case.expected["recalculatedP"])) <= VALUE_TOLERANCE
            ):
                recalc_matches += 1
        for diff in _diff_case(case, analyses):
            (lenient_diffs if case.lenient else failures).append(diff)
    return ConformanceReport(
        total=len(cases),
        detected=detected,
        p_expected=p_expected,
        p_detected=p_detected,
        recalc_expected=recalc_expected,
        recalc_matches=recalc_matches,
        failures=failures,
        lenient_diffs=lenient_diffs,
    )


class MutationKind(Enum):
    DIGIT_SUBSTITUTE = "digit_substitute"
    DIGIT_OMIT = "digit_omit"
    DIGIT_ADD = "digit_add"
    SWAP_STAT_P = "swap_stat_p"
    SEPARATOR_CORRUPT = "separator_corrupt"
    OPERATOR_CORRUPT = "operator_corrupt"


@dataclass(frozen=True)
class Mutation:
    """A deterministic single-edit transcription error."""

    kind: MutationKind
    seed: int = 0


_SEPARATOR_RE = re.compile(r", |; | (?=[A-Za-z])")
_OPERATOR_RE = re.compile(r"<=>|<=|>=|[=<>]")
_OPERATOR_CHOICES = ("=", "<", ">", "<=", ">=")


@lru_cache(maxsize=512)
def _token_spans(text: str) -> tuple[tuple[int, int] | None, tuple[int, int] | None]:
    """Raw-text spans of the statistic value token and the p value token."""
    normalized = repair_pdf_artifacts(normalize_text(text))
    for result in extract_results(normalized):
        stat_span = p_span = None
        if result.stat_value_span is not None and result.stat_value is not None:
            stat_span = normalized.raw_span(*result.stat_value_span)
        if result.p_value_span is not None and result.reported_p is not None:
            p_span = normalized.raw_span(*result.p_value_span)
        if stat_span or p_span:
            return stat_span, p_span
    return None, None


def mutate(text: str, mutation: Mutation) -> str:
    """Apply one deterministic single-edit mutation to a result string.

    Digit mutations target the statistic value; raises
    :class:`NotMutable` when the input lacks the element the mutation
    kind requires.
    """
    rng = random.Random("%s:%d" % (mutation.kind.value, mutation.seed))
    kind = mutation.kind

    if kind in (MutationKind.DIGIT_SUBSTITUTE, MutationKind.DIGIT_OMIT, MutationKind.DIGIT_ADD):
        stat_span, _ = _token_spans(text)
        if stat_span is None:
            raise NotMutable("input has no statistic value to mutate")
        start, end = stat_span
        digit_positions = [i for i in range(start, end) if text[i].isdigit()]
        if not digit_positions:
            raise NotMutable("statistic value has no digits")
        if kind is MutationKind.DIGIT_SUBSTITUTE:
            pos = rng.choice(digit_positions)
            replacement = rng.choice([d for d in "0123456789" if d != text[pos]])
            return text[:pos] + replacement + text[pos + 1:]
        if kind is MutationKind.DIGIT_OMIT:
            pos = rng.choice(digit_positions)
            return text[:pos] + text[pos + 1:]
        pos = rng.choice(digit_positions)
        insert_at = pos + rng.choice((0, 1))
        return text[:insert_at] + rng.choice("0123456789") + text[insert_at:]

    if kind is MutationKind.SWAP_STAT_P:
        stat_span, p_span = _token_spans(text)
        if stat_span is None or p_span is None:
            raise NotMutable("swap requires both a statistic value and a p value")
        (s1, e1), (s2, e2) = sorted([stat_span, p_span])
        return text[:s1] + text[s2:e2] + text[e1:s2] + text[s1:e1] + text[e2:]

    if kind is MutationKind.SEPARATOR_CORRUPT:
        matches = list(_SEPARATOR_RE.finditer(text))
        if not matches:
            raise NotMutable("input has no separator to corrupt")
        m = rng.choice(matches)
        choices = [c for c in ("; ", " ", ",  ", ", ") if c != m.group(0)]
        return text[:m.start()] + rng.choice(choices) + text[m.end():]

    if kind is MutationKind.OPERATOR_CORRUPT:
        matches = list(_OPERATOR_RE.finditer(text))
        if not matches:
            raise NotMutable("input has no comparison operator to corrupt")
        m = rng.choice(matches)
        choices = [c for c in _OPERATOR_CHOICES if c != m.group(0)]
        return text[:m.start()] + rng.choice(choices) + text[m.end():]

    raise NotMutable("unsupported mutation kind: %r" % (kind,))
