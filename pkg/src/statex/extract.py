"""Detection and structured parsing of statistical result reports.

A result report is a run of "sticked" clauses: a statistic label with an
optional degrees-of-freedom group, a comparator and a value, followed by
companion values (Cohen's d, R², beta/SE) and a p clause, all glued by
comma, semicolon, or bare space separators.  The scanner finds maximal
runs in normalized text; the clause walker turns each run into one or
more :class:`ParsedResult` records.

The label classifier is deliberately literal: ``t``/``t2``/``t^2`` are t
statistics, ``X``/``x``/``X2``/``chi2`` are chi-square, ``R2`` is a model
fit, and every other letter is Unknown.  Unknown is never coerced to
chi-square, no matter what squared mark it carries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .normalize import NormalizedText


class MalformedNumber(ValueError):
    """A token in value position has no parseable numeric prefix."""


class StatKind(Enum):
    T = "t"
    F = "F"
    R = "r"
    Z = "Z"
    CHI2 = "Chi2"
    Q = "Q"
    H = "H"
    G2 = "G2"
    U = "U"
    R2 = "R2"
    BETA_SE = "BetaSE"
    P_ONLY = "POnly"
    UNKNOWN = "Unknown"


class Comparator(Enum):
    EQ = "="
    LT = "<"
    GT = ">"
    LE = "<="
    GE = ">="
    INDETERMINATE = "<=>"
    NS = "ns"


class RangeViolation(Enum):
    P_OUT_OF_RANGE = "p_out_of_range"
    R_OUT_OF_RANGE = "r_out_of_range"
    R2_OUT_OF_RANGE = "R2_out_of_range"


@dataclass(frozen=True)
class ResultSpan:
    """Character range of one result in normalized text and in the raw input."""

    start: int
    end: int
    raw_start: int
    raw_end: int


@dataclass
class ParsedResult:
    """One extracted statistical report.

    ``df1`` holds the (first) degrees of freedom as parsed; output layers
    decide which presentation column it lands in.  Companion values seen
    inside the same report (d, R², beta, SE) are kept alongside the main
    statistic.  Out-of-range values are retained and flagged, never
    dropped.
    """

    kind: StatKind
    label: str = ""
    stat_comp: Comparator | None = None
    stat_value: float | None = None
    df1: float | None = None
    df2: float | None = None
    d: float | None = None
    r2: float | None = None
    r2_comp: Comparator | None = None
    beta: float | None = None
    se_beta: float | None = None
    p_comp: Comparator | None = None
    reported_p: float | None = None
    reported_p_decimals: int = 0
    plural: bool = False
    range_violations: frozenset[RangeViolation] = frozenset()
    span: ResultSpan | None = field(default=None, compare=False)
    stat_value_span: tuple[int, int] | None = field(default=None, compare=False)
    p_value_span: tuple[int, int] | None = field(default=None, compare=False)


# Letter-to-kind table, taken verbatim from the documented extraction
# behavior for the full 3x52 label sweep.  Squared marks survive for a few
# uppercase families (Q2, H2, G2) and for t; they turn everything else into
# an unrecognized label.
_KIND_BY_LABEL: dict[str, StatKind] = {
    "t": StatKind.T, "t2": StatKind.T, "t^2": StatKind.T,
    "F": StatKind.F,
    "r": StatKind.R,
    "Z": StatKind.Z, "z": StatKind.Z,
    "Q": StatKind.Q, "q": StatKind.Q, "Q2": StatKind.Q, "Q^2": StatKind.Q,
    "H": StatKind.H, "H2": StatKind.H, "H^2": StatKind.H,
    "G2": StatKind.G2, "G^2": StatKind.G2,
    "U": StatKind.U,
    "R2": StatKind.R2, "R^2": StatKind.R2, "r2": StatKind.R2, "r^2": StatKind.R2,
    "chi2": StatKind.CHI2,
    "X": StatKind.CHI2, "x": StatKind.CHI2,
    "X2": StatKind.CHI2, "x2": StatKind.CHI2, "X^2": StatKind.CHI2, "x^2": StatKind.CHI2,
}

# Kinds whose single df is conventionally presented in the df2 column.
DF2_KINDS = frozenset({StatKind.T, StatKind.R})
# Kinds that never carry a df (any group after the label is discarded).
_DFLESS_KINDS = frozenset({StatKind.Z, StatKind.U, StatKind.R2})
# Kinds that accept a two-value df group as (df1, df2).
_TWO_DF_KINDS = frozenset({StatKind.F, StatKind.CHI2, StatKind.Q, StatKind.H, StatKind.G2})

_SEP_RE = re.compile(r"[ ]*[,;][ ]*|[ ]+")
_NS_RE = re.compile(r"[nN]\.[ ]?[sS]\.?(?![A-Za-z0-9])|[nN][sS]\.?(?![A-Za-z0-9])")
_HEAD_RE = re.compile(
    r"(?<![A-Za-z0-9_])"
    r"(?P<head>chi2|beta|SE|se|df|[A-Za-z](?:\^2|2)?)"
    r"(?P<plural>'s)?"
    r"(?=[^A-Za-z0-9]|$)"
)
_INDEX_RE = re.compile(r"[ _]?(?P<word>[A-Za-z][A-Za-z0-9_]{1,11})(?=\()")
_DF_GROUP_RE = re.compile(r"\([ ]*(?P<body>[^()]{0,40}?)[ ]*\)")
_COMP_RE = re.compile(r"[ ]*(?P<comp><=>|<=|>=|=|<|>)[ ]*")
_VALUE_TOKEN_RE = re.compile(r"[^\s,;()]+")
_NUMBER_PREFIX_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)")
_PLAIN_NUMBER_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)$")

_COMPARATORS = {c.value: c for c in Comparator if c is not Comparator.NS}
_RESERVED_INDEX_WORDS = frozenset({"df", "beta", "SE", "se", "chi2"})


def classify_statistic(label: str) -> StatKind:
    """Map a canonical head token to its statistic family.

    Pure function of the token: any letter outside the recognized table,
    with or without a ``2``/``^2`` mark, is Unknown.
    """
    return _KIND_BY_LABEL.get(label, StatKind.UNKNOWN)


def _parse_plain(token: str) -> tuple[float, int]:
    m = _PLAIN_NUMBER_RE.match(token)
    if not m:
        raise MalformedNumber(token)
    text = m.group(0)
    decimals = len(text.split(".", 1)[1]) if "." in text else 0
    return float(text), decimals


def parse_number(token: str) -> float:
    """Parse a value token into a float.

    Handles leading-dot decimals, percent values, simple fractions, caret
    exponents, and corrupted decimals (longest valid numeric prefix).
    Raises :class:`MalformedNumber` when no numeric prefix exists.
    """
    return _parse_number_ex(token)[0]


def _parse_number_ex(token: str) -> tuple[float, int]:
    """Return (value, written decimal places) for a value token."""
    if not token:
        raise MalformedNumber(token)
    if token.endswith("%"):
        value, decimals = _parse_plain(token[:-1])
        return value / 100.0, decimals + 2
    if "/" in token:
        num, _, den = token.partition("/")
        try:
            n, n_dec = _parse_plain(num)
            d, _ = _parse_plain(den)
        except MalformedNumber:
            raise MalformedNumber(token) from None
        if d == 0:
            raise MalformedNumber(token)
        return n / d, max(n_dec, 2)
    if "^" in token:
        base, _, exponent = token.partition("^")
        try:
            b, b_dec = _parse_plain(base)
            e, _ = _parse_plain(exponent)
        except MalformedNumber:
            raise MalformedNumber(token) from None
        return b ** e, b_dec
    m = _NUMBER_PREFIX_RE.match(token)
    if not m:
        raise MalformedNumber(token)
    text = m.group(0)
    mantissa = text.split(".", 1)
    decimals = len(mantissa[1]) if len(mantissa) > 1 else 0
    return float(text), decimals


def parse_df(group: str, kind: StatKind = StatKind.UNKNOWN) -> tuple[float, float | None]:
    """Parse a df group body ("12", "1,23", "1,234", "11.4").

    Two comma-separated values are (df1, df2) for two-df statistic
    families; for single-df statistics the comma is accepted as a
    thousands separator only when the second part has exactly three
    digits.  Empty or garbled groups raise :class:`MalformedNumber`.
    """
    parts = [p.strip() for p in group.split(",")]
    if not parts or any(not p for p in parts) or len(parts) > 2:
        raise MalformedNumber(group)
    try:
        values = [_parse_plain(p)[0] for p in parts]
    except MalformedNumber:
        raise MalformedNumber(group) from None
    if len(values) == 1:
        return values[0], None
    if kind in _TWO_DF_KINDS:
        return values[0], values[1]
    # Thousands-separated single df, e.g. "(1,234)" for a t statistic.
    if re.fullmatch(r"\d{3}", parts[1]) and re.fullmatch(r"\d+", parts[0]):
        return float(parts[0]) * 1000 + float(parts[1]), None
    raise MalformedNumber(group)


@dataclass
class _Clause:
    role: str  # "stat" | "p" | "ns" | "df" | "d" | "r2" | "beta" | "se"
    start: int
    end: int
    label: str = ""
    plural: bool = False
    df_body: str | None = None
    comp: Comparator | None = None
    value: float | None = None
    decimals: int = 0
    value_span: tuple[int, int] | None = None
    malformed: bool = False


def _match_value(text: str, pos: int) -> tuple[float | None, int, tuple[int, int], int, bool]:
    """Consume one value token; returns (value, decimals, span, end, malformed)."""
    m = _VALUE_TOKEN_RE.match(text, pos)
    if not m:
        return None, 0, (pos, pos), pos, True
    try:
        value, decimals = _parse_number_ex(m.group(0))
        return value, decimals, (m.start(), m.end()), m.end(), False
    except MalformedNumber:
        return None, 0, (m.start(), m.end()), m.end(), True


def _match_clause(text: str, pos: int, require_sep: bool) -> _Clause | None:
    sep = _SEP_RE.match(text, pos)
    if require_sep:
        if not sep:
            return None
        p = sep.end()
    else:
        p = sep.end() if sep else pos
    if p >= len(text):
        return None

    ns = _NS_RE.match(text, p)
    if ns:
        return _Clause(role="ns", start=p, end=ns.end(), comp=Comparator.NS)

    head_m = _HEAD_RE.match(text, p)
    if not head_m:
        return None
    head = head_m.group("head")
    plural = bool(head_m.group("plural"))
    q = head_m.end()

    if head == "df":
        comp_m = _COMP_RE.match(text, q)
        if not comp_m or comp_m.group("comp") != "=":
            return None
        value, decimals, vspan, end, malformed = _match_value(text, comp_m.end())
        if malformed and value is None and vspan[0] == vspan[1]:
            return None
        return _Clause(role="df", start=p, end=end, value=value, malformed=malformed)

    if head in ("beta", "SE", "se"):
        comp_m = _COMP_RE.match(text, q)
        if not comp_m:
            return None
        value, decimals, vspan, end, malformed = _match_value(text, comp_m.end())
        if vspan[0] == vspan[1]:
            return None
        role = "beta" if head == "beta" else "se"
        return _Clause(
            role=role, start=p, end=end, label=head,
            comp=_COMPARATORS[comp_m.group("comp")], value=value,
            decimals=decimals, value_span=vspan, malformed=malformed,
        )

    # Optional index word between label and df group: "t index(12)".
    idx_m = _INDEX_RE.match(text, q)
    if idx_m and idx_m.group("word") not in _RESERVED_INDEX_WORDS:
        q = idx_m.end()

    df_m = _DF_GROUP_RE.match(text, q)
    df_body = None
    if df_m:
        df_body = df_m.group("body")
        q = df_m.end()

    comp_m = _COMP_RE.match(text, q)
    if not comp_m:
        return None
    comp = _COMPARATORS[comp_m.group("comp")]
    q = comp_m.end()

    # A p clause never carries a df group; "p(12)=.3" is an unknown
    # statistic label, not a reported p-value.
    if head == "p" and df_body is None:
        ns = _NS_RE.match(text, q)
        if ns:
            return _Clause(role="p", start=p, end=ns.end(), plural=plural, comp=Comparator.NS)
        value, decimals, vspan, end, malformed = _match_value(text, q)
        if vspan[0] == vspan[1]:
            return None
        return _Clause(
            role="p", start=p, end=end, plural=plural, comp=comp,
            value=value, decimals=decimals, value_span=vspan, malformed=malformed,
        )

    value, decimals, vspan, end, malformed = _match_value(text, q)
    if vspan[0] == vspan[1]:
        return None
    if head == "d" and df_body is None:
        role = "d"
    elif classify_statistic(head) is StatKind.R2:
        role = "r2"
    else:
        role = "stat"
    return _Clause(
        role=role, start=p, end=end, label=head, plural=plural, df_body=df_body,
        comp=comp, value=value, decimals=decimals, value_span=vspan, malformed=malformed,
    )


class _Builder:
    def __init__(self) -> None:
        self.start: int | None = None
        self.end: int = 0
        self.label: str | None = None
        self.kind: StatKind | None = None
        self.stat_comp: Comparator | None = None
        self.stat_value: float | None = None
        self.stat_value_span: tuple[int, int] | None = None
        self.df1: float | None = None
        self.df2: float | None = None
        self.df_group_len = 0
        self.d: float | None = None
        self.r2: float | None = None
        self.r2_comp: Comparator | None = None
        self.beta: float | None = None
        self.se_beta: float | None = None
        self.p_comp: Comparator | None = None
        self.reported_p: float | None = None
        self.reported_p_decimals = 0
        self.p_value_span: tuple[int, int] | None = None
        self.plural = False

    @property
    def empty(self) -> bool:
        return self.start is None

    @property
    def has_stat(self) -> bool:
        return self.label is not None or self.beta is not None

    @property
    def has_p(self) -> bool:
        return self.p_comp is not None

    def mark(self, clause: _Clause) -> None:
        if self.start is None:
            self.start = clause.start
        self.end = clause.end

    def build(self, text: NormalizedText) -> ParsedResult | None:
        if self.start is None:
            return None
        kind = self.kind
        if kind is None:
            kind = StatKind.P_ONLY if self.has_p else StatKind.UNKNOWN
        # A result must report at least one value.
        if self.stat_value is None and self.reported_p is None and self.p_comp is None:
            if self.beta is None:
                return None
        # Emission gate: prose fragments like "e=2.718" (unknown label, no
        # df, no p clause) are not results.
        if (
            kind is StatKind.UNKNOWN
            and not self.has_p
            and self.df1 is None
            and self.df_group_len == 0
        ):
            return None
        violations = set()
        if self.reported_p is not None and not 0.0 <= self.reported_p <= 1.0:
            violations.add(RangeViolation.P_OUT_OF_RANGE)
        if kind is StatKind.R and self.stat_value is not None and abs(self.stat_value) > 1.0:
            violations.add(RangeViolation.R_OUT_OF_RANGE)
        r2_values = [v for v in (self.r2, self.stat_value if kind is StatKind.R2 else None)
                     if v is not None]
        if any(not 0.0 <= v <= 1.0 for v in r2_values):
            violations.add(RangeViolation.R2_OUT_OF_RANGE)
        raw_start, raw_end = text.raw_span(self.start, self.end)
        return ParsedResult(
            kind=kind,
            label=self.label or "",
            stat_comp=self.stat_comp,
            stat_value=self.stat_value,
            df1=self.df1,
            df2=self.df2,
            d=self.d,
            r2=self.r2,
            r2_comp=self.r2_comp,
            beta=self.beta,
            se_beta=self.se_beta,
            p_comp=self.p_comp,
            reported_p=self.reported_p,
            reported_p_decimals=self.reported_p_decimals,
            plural=self.plural,
            range_violations=frozenset(violations),
            span=ResultSpan(self.start, self.end, raw_start, raw_end),
            stat_value_span=self.stat_value_span,
            p_value_span=self.p_value_span,
        )


def _attach_stat(builder: _Builder, clause: _Clause) -> None:
    kind = classify_statistic(clause.label)
    builder.label = clause.label
    builder.stat_comp = clause.comp
    builder.stat_value = clause.value
    builder.stat_value_span = clause.value_span
    builder.plural = builder.plural or clause.plural
    df1 = df2 = None
    group_len = 0
    if clause.df_body is not None:
        group_len = len([p for p in clause.df_body.split(",") if p.strip()]) or 1
        if kind not in _DFLESS_KINDS:
            try:
                df1, df2 = parse_df(clause.df_body, kind)
            except MalformedNumber:
                df1 = df2 = None
    # An F head with a single-value df group is not a valid F report; a
    # bare X/x head without any df group is not a chi-square report.
    if kind is StatKind.F and clause.df_body is not None and group_len == 1:
        kind = StatKind.UNKNOWN
    if clause.label in ("X", "x") and clause.df_body is None:
        kind = StatKind.UNKNOWN
    builder.kind = kind
    if kind not in _DFLESS_KINDS:
        builder.df1, builder.df2 = df1, df2
    builder.df_group_len = group_len


def _walk_run(text: NormalizedText, start: int, limit: int | None) -> tuple[list[ParsedResult], int]:
    """Parse clauses from ``start``; returns results and the run end."""
    s = text.text
    results: list[ParsedResult] = []
    builder = _Builder()
    pos = start
    first = True
    while True:
        if limit is not None and pos >= limit:
            break
        clause = _match_clause(s, pos, require_sep=not first)
        if clause is None or (limit is not None and clause.end > limit):
            break
        role = clause.role
        if role == "stat":
            if builder.has_stat or builder.has_p:
                built = builder.build(text)
                if built:
                    results.append(built)
                builder = _Builder()
            builder.mark(clause)
            _attach_stat(builder, clause)
        elif role == "r2":
            if builder.has_stat and builder.kind not in (StatKind.R2, StatKind.BETA_SE):
                builder.mark(clause)
                builder.r2 = clause.value
                builder.r2_comp = clause.comp
            else:
                if builder.has_stat or builder.has_p:
                    built = builder.build(text)
                    if built:
                        results.append(built)
                    builder = _Builder()
                builder.mark(clause)
                _attach_stat(builder, clause)
        elif role == "p":
            if builder.has_p:
                built = builder.build(text)
                if built:
                    results.append(built)
                builder = _Builder()
            builder.mark(clause)
            builder.p_comp = clause.comp
            builder.reported_p = clause.value
            builder.reported_p_decimals = clause.decimals if clause.value is not None else 0
            builder.p_value_span = clause.value_span
            builder.plural = builder.plural or clause.plural
        elif role == "ns":
            if builder.empty or builder.has_p:
                break
            builder.mark(clause)
            builder.p_comp = Comparator.NS
            builder.reported_p = None
        elif role == "df":
            if builder.empty:
                break
            builder.mark(clause)
            if (
                builder.df1 is None
                and builder.kind not in _DFLESS_KINDS
                and clause.value is not None
            ):
                builder.df1 = clause.value
        elif role == "d":
            if builder.empty:
                break
            builder.mark(clause)
            if builder.d is None:
                builder.d = clause.value
        elif role == "beta":
            if builder.has_stat:
                built = builder.build(text)
                if built:
                    results.append(built)
                builder = _Builder()
            builder.mark(clause)
            builder.beta = clause.value
            builder.stat_comp = clause.comp
            builder.stat_value_span = clause.value_span
            builder.kind = StatKind.BETA_SE
        elif role == "se":
            if builder.empty or builder.beta is None:
                break
            builder.mark(clause)
            builder.se_beta = clause.value
        pos = clause.end
        first = False
    if builder.kind is StatKind.BETA_SE and builder.se_beta is None:
        builder.kind = StatKind.P_ONLY if builder.has_p else None
    built = builder.build(text)
    if built:
        results.append(built)
    return results, (pos if results else start)


_ANCHOR_HINT_RE = re.compile(r"[A-Za-z]")


def _scan(text: NormalizedText) -> list[ParsedResult]:
    s = text.text
    results: list[ParsedResult] = []
    pos = 0
    while pos < len(s):
        hint = _ANCHOR_HINT_RE.search(s, pos)
        if not hint:
            break
        clause = _match_clause(s, hint.start(), require_sep=False)
        anchor_ok = clause is not None and clause.role in ("stat", "r2", "p", "beta")
        if not anchor_ok:
            pos = hint.start() + 1
            continue
        run_results, end = _walk_run(text, hint.start(), None)
        if not run_results:
            pos = hint.start() + 1
            continue
        results.extend(run_results)
        pos = max(end, hint.start() + 1)
    return results


def find_result_spans(text: NormalizedText) -> list[ResultSpan]:
    """Locate non-overlapping result spans, left to right.

    A span at index 0 is detected like any other; empty or statistics-free
    text yields an empty list.
    """
    return [r.span for r in _scan(text) if r.span is not None]


def parse_result(span: ResultSpan, text: NormalizedText) -> ParsedResult:
    """Parse the result covered by ``span`` into a :class:`ParsedResult`."""
    results, _ = _walk_run(text, span.start, span.end)
    if not results:
        raise ValueError("span does not cover a parseable result: %r" % (span,))
    return results[0]


def extract_results(text: NormalizedText) -> list[ParsedResult]:
    """Find and parse every result in ``text`` in one pass."""
    return _scan(text)


_DF_AS_INT_RE = re.compile(r"\.0$")


def _fmt_number(value: float) -> str:
    text = repr(float(value))
    return _DF_AS_INT_RE.sub("", text)


def render_result(result: ParsedResult) -> str:
    """Render a ParsedResult in canonical reporting style.

    Re-parsing the rendering yields an equal result for reports without
    range violations (print/parse round trip).
    """
    parts: list[str] = []
    plural_mark = "'s" if result.plural else ""
    if result.kind is StatKind.BETA_SE:
        comp = (result.stat_comp or Comparator.EQ).value
        parts.append("beta%s%s" % (comp, _fmt_number(result.beta if result.beta is not None else 0.0)))
        if result.se_beta is not None:
            parts.append("SE=%s" % _fmt_number(result.se_beta))
    elif result.kind is not StatKind.P_ONLY and result.label:
        head = result.label + plural_mark
        df = ""
        if result.df1 is not None:
            df = "(%s)" % _fmt_number(result.df1)
            if result.df2 is not None:
                df = "(%s,%s)" % (_fmt_number(result.df1), _fmt_number(result.df2))
        comp = (result.stat_comp or Comparator.EQ).value
        value = "" if result.stat_value is None else _fmt_number(result.stat_value)
        parts.append("%s%s%s%s" % (head, df, comp, value))
    if result.d is not None:
        parts.append("d=%s" % _fmt_number(result.d))
    if result.r2 is not None:
        parts.append("R2%s%s" % ((result.r2_comp or Comparator.EQ).value, _fmt_number(result.r2)))
    if result.p_comp is Comparator.NS:
        parts.append("n.s.")
    elif result.p_comp is not None and result.reported_p is not None:
        parts.append(
            "p%s%s%.*f"
            % (plural_mark, result.p_comp.value, result.reported_p_decimals, result.reported_p)
        )
    return ", ".join(parts)
