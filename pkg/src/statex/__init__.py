"""statex: extract statistical test results from text and check them.

The pipeline normalizes raw text onto one canonical representation,
detects and parses result reports across heterogeneous reporting styles,
recomputes p-values from the reported statistics, and flags
inconsistencies and decision errors.  An embedded 187-string conformance
corpus pins the required behavior.
"""

from .check import CheckOptions, Verdict, check_consistency, detect_one_tailed_text
from .corpus import (
    ConformanceReport,
    CorpusCase,
    CorruptCorpus,
    Mutation,
    MutationKind,
    NotMutable,
    load_corpus,
    mutate,
    run_conformance,
)
from .extract import (
    Comparator,
    MalformedNumber,
    ParsedResult,
    RangeViolation,
    ResultSpan,
    StatKind,
    classify_statistic,
    extract_results,
    find_result_spans,
    parse_df,
    parse_number,
    parse_result,
    render_result,
)
from .normalize import NormalizedText, normalize_text, repair_pdf_artifacts
from .pipeline import Analysis, analyze_text, wide_fields
from .stats import (
    DomainError,
    RecomputedP,
    TailMode,
    chi2_cdf,
    chi2_sf,
    f_cdf,
    f_sf,
    normal_cdf,
    recompute_p,
    reg_inc_beta,
    reg_inc_gamma_lower,
    t_cdf,
    t_sf_two_sided,
)

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "CheckOptions",
    "Comparator",
    "ConformanceReport",
    "CorpusCase",
    "CorruptCorpus",
    "DomainError",
    "MalformedNumber",
    "Mutation",
    "MutationKind",
    "NormalizedText",
    "NotMutable",
    "ParsedResult",
    "RangeViolation",
    "RecomputedP",
    "ResultSpan",
    "StatKind",
    "TailMode",
    "Verdict",
    "analyze_text",
    "check_consistency",
    "chi2_cdf",
    "chi2_sf",
    "classify_statistic",
    "detect_one_tailed_text",
    "extract_results",
    "f_cdf",
    "f_sf",
    "find_result_spans",
    "load_corpus",
    "mutate",
    "normal_cdf",
    "normalize_text",
    "parse_df",
    "parse_number",
    "parse_result",
    "recompute_p",
    "reg_inc_beta",
    "reg_inc_gamma_lower",
    "render_result",
    "repair_pdf_artifacts",
    "run_conformance",
    "t_cdf",
    "t_sf_two_sided",
    "wide_fields",
]
