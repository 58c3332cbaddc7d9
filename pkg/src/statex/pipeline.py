"""End-to-end analysis: normalize, repair, extract, recompute, check."""

from __future__ import annotations

from dataclasses import dataclass

from .check import CheckOptions, Verdict, check_consistency, detect_one_tailed_text
from .extract import Comparator, ParsedResult, StatKind, extract_results
from .normalize import normalize_text, repair_pdf_artifacts
from .stats import RecomputedP, SIGN_SYMMETRIC_KINDS, TailMode, recompute_p

# Column vocabulary of the wide presentation: one (comparator, value)
# column pair per statistic family, plus shared df/companion/p columns.
WIDE_COLUMNS = (
    "result",
    "Z_op", "Z", "F_op", "F", "t_op", "t", "d", "r_op", "r", "R2_op", "R2",
    "U_op", "U", "H_op", "H", "G2_op", "G2", "Chi2", "Q_op", "Q",
    "df1", "df2", "beta", "SEbeta", "Zest", "p_op", "p", "recalculatedP",
)

# Presentation mapping for the statistic value/comparator columns.  Chi2
# has no comparator column of its own in this layout.
_STAT_COLUMNS: dict[StatKind, tuple[str | None, str]] = {
    StatKind.Z: ("Z_op", "Z"),
    StatKind.F: ("F_op", "F"),
    StatKind.T: ("t_op", "t"),
    StatKind.R: ("r_op", "r"),
    StatKind.R2: ("R2_op", "R2"),
    StatKind.U: ("U_op", "U"),
    StatKind.H: ("H_op", "H"),
    StatKind.G2: ("G2_op", "G2"),
    StatKind.CHI2: (None, "Chi2"),
    StatKind.Q: ("Q_op", "Q"),
}

# Kinds whose single df is presented in the df2 column (t, r); the
# chi-square family and F use df1.
_DF2_PRESENTED = frozenset({StatKind.T, StatKind.R})


@dataclass(frozen=True)
class Analysis:
    """One extracted result with its recomputation and verdict."""

    result: ParsedResult
    recomputed: RecomputedP | None
    verdict: Verdict
    raw_text: str


def analyze_text(text: str, opts: CheckOptions = CheckOptions()) -> list[Analysis]:
    """Run the full pipeline over one document."""
    normalized = repair_pdf_artifacts(normalize_text(text))
    one_tailed = detect_one_tailed_text(normalized)
    analyses: list[Analysis] = []
    for result in extract_results(normalized):
        tails = TailMode.TWO_TAILED
        if opts.assume_one_tailed and result.kind in SIGN_SYMMETRIC_KINDS:
            tails = TailMode.ONE_TAILED
        recomputed = recompute_p(result, tails)
        verdict = check_consistency(result, recomputed, opts, one_tailed_in_txt=one_tailed)
        span = result.span
        raw_text = normalized.raw[span.raw_start:span.raw_end] if span else ""
        analyses.append(Analysis(result, recomputed, verdict, raw_text))
    return analyses


def wide_fields(analysis: Analysis) -> dict[str, float | str]:
    """Typed wide-view of one analysis, keyed by WIDE_COLUMNS names.

    Unknown statistics contribute only their p clause, mirroring the
    presentation where unrecognized labels have no column to land in.
    """
    res = analysis.result
    fields: dict[str, float | str] = {}
    columns = _STAT_COLUMNS.get(res.kind)
    if columns is not None and res.stat_value is not None:
        op_col, value_col = columns
        if op_col is not None and res.stat_comp is not None:
            fields[op_col] = res.stat_comp.value
        fields[value_col] = res.stat_value
        if res.df1 is not None:
            if res.kind in _DF2_PRESENTED and res.df2 is None:
                fields["df2"] = res.df1
            else:
                fields["df1"] = res.df1
                if res.df2 is not None:
                    fields["df2"] = res.df2
    if res.kind is StatKind.BETA_SE and res.beta is not None:
        fields["beta"] = res.beta
        if res.se_beta is not None:
            fields["SEbeta"] = res.se_beta
            fields["Zest"] = res.beta / res.se_beta
    if res.d is not None:
        fields["d"] = res.d
    if res.r2 is not None:
        if res.r2_comp is not None:
            fields["R2_op"] = res.r2_comp.value
        fields["R2"] = res.r2
    if res.p_comp is not None:
        fields["p_op"] = res.p_comp.value
        if res.reported_p is not None and res.p_comp is not Comparator.NS:
            fields["p"] = res.reported_p
    if analysis.recomputed is not None:
        fields["recalculatedP"] = analysis.recomputed.value
    return fields
