"""Consistency semantics: reported p versus recomputed p.

An error is an incompatibility between the reported p clause and the
recomputed p under a rounding-aware rule; a decision error additionally
flips the significance call at the alpha threshold.  One-tailed context
can rescue an apparent error for sign-symmetric statistics when enabled.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .extract import Comparator, ParsedResult
from .normalize import NormalizedText
from .stats import RecomputedP, SIGN_SYMMETRIC_KINDS, TailMode

# Slack for the half-unit-in-last-place rounding comparison, so a reported
# value that is exactly the rounding of the computed value never flags.
_ROUNDING_GUARD = 1e-12

_ONE_TAILED_RE = re.compile(r"\b(?:one[ -](?:sided|tailed)|directional)\b", re.IGNORECASE)


@dataclass(frozen=True)
class CheckOptions:
    """Switches for the consistency check.

    ``one_tailed_txt`` forgives errors that vanish under p/2 when the
    document mentions one-tailed testing; ``assume_one_tailed`` halves the
    recomputed p for sign-symmetric statistics unconditionally.  The two
    switches are independent.
    """

    alpha: float = 0.05
    one_tailed_txt: bool = False
    assume_one_tailed: bool = False


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one result.

    ``error`` and ``decision_error`` are None when no check was possible
    (no recomputation, no checkable p clause).  A decision error is a
    special case of an error: decision_error implies error.
    """

    recomputed: RecomputedP | None
    error: bool | None
    decision_error: bool | None
    one_tailed_in_txt: bool = False


def detect_one_tailed_text(document: NormalizedText | str) -> bool:
    """True when the document mentions one-sided/one-tailed/directional testing."""
    text = document.text if isinstance(document, NormalizedText) else document
    return bool(_ONE_TAILED_RE.search(text))


def _inconsistent(computed: float, result: ParsedResult, alpha: float) -> bool | None:
    comp = result.p_comp
    if comp is Comparator.NS:
        # Strict reading: "not significant" is consistent only if the
        # recomputed p actually exceeds alpha.
        return not computed > alpha
    reported = result.reported_p
    if reported is None or comp is None or comp is Comparator.INDETERMINATE:
        return None
    if comp is Comparator.EQ:
        threshold = 0.5 * 10.0 ** (-result.reported_p_decimals)
        return not abs(computed - reported) < threshold + _ROUNDING_GUARD
    if comp is Comparator.LT:
        return not computed < reported
    if comp is Comparator.GT:
        return not computed > reported
    if comp is Comparator.LE:
        return not computed <= reported
    if comp is Comparator.GE:
        return not computed >= reported
    return None


def _reported_significant(result: ParsedResult, alpha: float) -> bool:
    if result.p_comp is Comparator.NS:
        return False
    assert result.reported_p is not None
    return result.reported_p <= alpha


def check_consistency(
    result: ParsedResult,
    recomputed: RecomputedP | None,
    opts: CheckOptions = CheckOptions(),
    one_tailed_in_txt: bool = False,
) -> Verdict:
    """Compare a reported p clause with its recomputed value.

    Equality clauses are consistent when the computed value rounds to the
    reported one at its written precision; inequality clauses are taken at
    face value; ``n.s.`` means the computed p must exceed alpha.  Results
    whose p clause cannot be checked yield a Verdict with both flags None.
    """
    if recomputed is None:
        return Verdict(None, None, None, one_tailed_in_txt)
    computed = recomputed.value
    error = _inconsistent(computed, result, opts.alpha)
    if error is None:
        return Verdict(recomputed, None, None, one_tailed_in_txt)
    # One-tailed leniency: a failing two-tailed check that passes at p/2
    # is forgiven when the document signals directional testing.
    if (
        error
        and opts.one_tailed_txt
        and one_tailed_in_txt
        and recomputed.method in SIGN_SYMMETRIC_KINDS
        and recomputed.tails is TailMode.TWO_TAILED
    ):
        halved = _inconsistent(computed / 2.0, result, opts.alpha)
        if halved is False:
            error = False
            computed = computed / 2.0
    computed_significant = computed <= opts.alpha
    decision_error = error and _reported_significant(result, opts.alpha) != computed_significant
    return Verdict(recomputed, error, decision_error, one_tailed_in_txt)
