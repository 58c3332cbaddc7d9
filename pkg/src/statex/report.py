"""Verdict tables: long (per-check columns) and wide (per-family columns).

Rows hold typed values; serialization is deterministic so repeated runs
over identical input produce byte-identical output.  CSV uses RFC 4180
quoting with a header row; JSON emits one object per row with nulls for
empty cells.  An optional figure renderer summarizes a batch of rows to
PNG files next to the delimited output.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .extract import Comparator, StatKind
from .pipeline import WIDE_COLUMNS, Analysis, wide_fields

LONG_COLUMNS = (
    "source", "raw", "test_type", "df1", "df2", "test_comp", "test_value",
    "p_comp", "reported_p", "computed_p", "error", "decision_error",
    "one_tailed_in_txt",
)

_LONG_TYPES = {
    "source": str, "raw": str, "test_type": str, "test_comp": str, "p_comp": str,
    "df1": float, "df2": float, "test_value": float, "reported_p": float,
    "computed_p": float,
    "error": bool, "decision_error": bool, "one_tailed_in_txt": bool,
}

# Kinds whose single df is presented in the df2 column in the long layout.
_DF2_PRESENTED = frozenset({StatKind.T, StatKind.R})


@dataclass(frozen=True)
class OutputRow:
    """One output table row: an ordered mapping of column name to value."""

    columns: tuple[str, ...]
    values: dict[str, float | str | bool | None]

    def get(self, column: str) -> float | str | bool | None:
        return self.values.get(column)


def long_row(analysis: Analysis, source: str) -> OutputRow:
    """Build the statcheck-style long row for one analysis."""
    res = analysis.result
    verdict = analysis.verdict
    df1 = df2 = None
    if res.df1 is not None:
        if res.kind in _DF2_PRESENTED and res.df2 is None:
            df2 = res.df1
        else:
            df1, df2 = res.df1, res.df2
    test_value = res.stat_value
    test_comp = res.stat_comp.value if res.stat_comp else None
    if res.kind is StatKind.BETA_SE and res.beta is not None and res.se_beta:
        test_value = res.beta / res.se_beta
    values: dict[str, float | str | bool | None] = {
        "source": source,
        "raw": analysis.raw_text,
        "test_type": res.kind.value,
        "df1": df1,
        "df2": df2,
        "test_comp": test_comp,
        "test_value": test_value,
        "p_comp": res.p_comp.value if res.p_comp else None,
        "reported_p": res.reported_p,
        "computed_p": analysis.recomputed.value if analysis.recomputed else None,
        "error": verdict.error,
        "decision_error": verdict.decision_error,
        "one_tailed_in_txt": verdict.one_tailed_in_txt,
    }
    return OutputRow(LONG_COLUMNS, values)


def wide_row(analysis: Analysis, source: str) -> OutputRow:
    """Build the wide row for one analysis; numbers carry 2-decimal precision."""
    fields = wide_fields(analysis)
    values: dict[str, float | str | bool | None] = {c: None for c in WIDE_COLUMNS}
    values["result"] = analysis.raw_text
    for key, value in fields.items():
        values[key] = round(value, 2) if isinstance(value, float) else value
    columns = ("source",) + WIDE_COLUMNS
    values["source"] = source
    return OutputRow(columns, values)


def build_rows(
    analyses: Iterable[tuple[str, Analysis]], wide: bool = False
) -> list[OutputRow]:
    """Build output rows for (source, analysis) pairs, preserving order."""
    builder = wide_row if wide else long_row
    return [builder(analysis, source) for source, analysis in analyses]


def _format_cell(value: float | str | bool | None) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _cell_values(row: OutputRow, columns: tuple[str, ...]) -> list[str]:
    return [_format_cell(row.values.get(c)) for c in columns]


def emit_csv(rows: Sequence[OutputRow], columns: tuple[str, ...] | None = None) -> str:
    """Serialize rows to CSV (RFC 4180 quoting, UTF-8, header row)."""
    if columns is None:
        columns = rows[0].columns if rows else LONG_COLUMNS
    buffer = io.StringIO()
    writer = csv.writer(buffer, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(_cell_values(row, columns))
    return buffer.getvalue()


def emit_json(rows: Sequence[OutputRow], columns: tuple[str, ...] | None = None) -> str:
    """Serialize rows to a JSON array of objects; empty cells become null."""
    if columns is None:
        columns = rows[0].columns if rows else LONG_COLUMNS
    payload = [{c: row.values.get(c) for c in columns} for row in rows]
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def emit(rows: Sequence[OutputRow], fmt: str, columns: tuple[str, ...] | None = None) -> str:
    """Serialize rows in the requested format ("csv" or "json")."""
    if fmt == "csv":
        return emit_csv(rows, columns)
    if fmt == "json":
        return emit_json(rows, columns)
    raise ValueError("unsupported output format: %r" % (fmt,))


def _parse_cell(column: str, text: str, wide: bool) -> float | str | bool | None:
    if text == "":
        return None
    if not wide:
        kind = _LONG_TYPES.get(column, str)
        if kind is bool:
            return text == "TRUE"
        if kind is float:
            return float(text)
        return text
    if column in ("source", "result") or column.endswith("_op") or column == "p_op":
        return text
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(text: str) -> list[OutputRow]:
    """Parse CSV produced by :func:`emit_csv` back into typed rows."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = tuple(next(reader))
    except StopIteration:
        return []
    wide = "result" in header
    rows: list[OutputRow] = []
    for record in reader:
        values = {
            column: _parse_cell(column, cell, wide)
            for column, cell in zip(header, record)
        }
        rows.append(OutputRow(header, values))
    return rows


def render_figures(rows: Sequence[OutputRow], out_dir: str, prefix: str = "statex") -> list[str]:
    """Render summary figures for a batch of long rows to PNG files.

    Returns the written file paths.  Requires matplotlib (the "figures"
    extra); raises ImportError when it is unavailable.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[str] = []

    computed = [
        row.get("computed_p")
        for row in rows
        if isinstance(row.get("computed_p"), float)
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    if computed:
        ax.hist(computed, bins=20, range=(0.0, 1.0), color="#4878a8", edgecolor="black")
    ax.set_xlabel("recomputed p-value")
    ax.set_ylabel("count")
    ax.set_title("Distribution of recomputed p-values (n=%d)" % len(computed))
    path = out / ("%s_computed_p.png" % prefix)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    written.append(str(path))

    def count(column: str, value: bool) -> int:
        return sum(1 for row in rows if row.get(column) is value)

    labels = ["consistent", "error", "decision error", "unchecked"]
    counts = [
        count("error", False),
        count("error", True) - count("decision_error", True),
        count("decision_error", True),
        sum(1 for row in rows if row.get("error") is None),
    ]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(labels, counts, color=["#55a868", "#dd8452", "#c44e52", "#8c8c8c"])
    ax.set_ylabel("results")
    ax.set_title("Consistency verdicts (n=%d)" % len(rows))
    path = out / ("%s_verdicts.png" % prefix)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    written.append(str(path))
    return written
