"""Command-line front end.

Subcommands:
  check        extract and check results from text/HTML files, dirs, stdin
  conformance  run the embedded 187-string conformance suite
  corpus       export the conformance corpus for third-party benchmarking

Exit codes for ``check``: 0 on success with no decision errors, 2 when any
decision error was flagged, 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .check import CheckOptions
from .corpus import load_corpus, run_conformance
from .extract import MalformedNumber
from .pipeline import WIDE_COLUMNS, analyze_text
from .report import LONG_COLUMNS, OutputRow, build_rows, emit, render_figures

_TEXT_SUFFIXES = {".txt", ".text", ".md"}
_HTML_SUFFIXES = {".html", ".htm", ".xhtml"}
_SUP2_RE = re.compile(r"<sup>\s*2\s*</sup>", re.IGNORECASE)
_TAG_RE = re.compile(r"<[^>]{0,500}>")


def strip_html(text: str) -> str:
    """Drop markup, folding ``<sup>2</sup>`` to ``2`` before tag removal."""
    text = _SUP2_RE.sub("2", text)
    return _TAG_RE.sub(" ", text)


def _iter_input_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(
            p for p in path.rglob("*")
            if p.is_file() and p.suffix.lower() in (_TEXT_SUFFIXES | _HTML_SUFFIXES)
        )
    return [path]


def _read_document(path: Path) -> str:
    text = path.read_text(encoding="utf-8", errors="replace")
    if path.suffix.lower() in _HTML_SUFFIXES:
        text = strip_html(text)
    return text


def _worker_count(n_docs: int) -> int:
    env = os.environ.get("STATEX_THREADS", "")
    if env.strip():
        try:
            cap = max(1, int(env))
        except ValueError:
            cap = 1
        return min(cap, max(1, n_docs))
    return min(8, max(1, n_docs))


def _check_command(args: argparse.Namespace) -> int:
    opts = CheckOptions(
        alpha=args.alpha,
        one_tailed_txt=args.one_tailed_txt,
        assume_one_tailed=args.assume_one_tailed,
    )
    documents: list[tuple[str, str]] = []
    had_read_error = False
    inputs = args.inputs or ["-"]
    for name in inputs:
        if name == "-":
            documents.append(("stdin", sys.stdin.read()))
            continue
        path = Path(name)
        if not path.exists():
            print("statex: cannot read %s: no such file" % name, file=sys.stderr)
            had_read_error = True
            continue
        for file_path in _iter_input_files(path):
            try:
                documents.append((str(file_path), _read_document(file_path)))
            except OSError as exc:
                print("statex: cannot read %s: %s" % (file_path, exc), file=sys.stderr)
                had_read_error = True
    if had_read_error and not documents:
        return 1

    def analyze(doc: tuple[str, str]):
        source, text = doc
        return [(source, a) for a in analyze_text(text, opts)]

    if documents:
        with ThreadPoolExecutor(max_workers=_worker_count(len(documents))) as pool:
            per_doc = list(pool.map(analyze, documents))
    else:
        per_doc = []
    pairs = [pair for doc_pairs in per_doc for pair in doc_pairs]
    pairs.sort(key=lambda pair: (pair[0], pair[1].result.span.start if pair[1].result.span else 0))

    if args.strict_numbers:
        for source, analysis in pairs:
            span = analysis.result.span
            if _has_malformed_value(analysis):
                print(
                    "statex: %s: malformed number in result at offset %d: %r"
                    % (source, span.raw_start if span else 0, analysis.raw_text),
                    file=sys.stderr,
                )
                return 1

    rows = build_rows(pairs, wide=args.wide)
    columns = ("source",) + WIDE_COLUMNS if args.wide else LONG_COLUMNS
    payload = emit(rows, args.format, columns)
    _write_output(payload, args.output)
    if args.figures:
        if args.wide:
            print("statex: --figures requires long-format rows", file=sys.stderr)
            return 1
        _render_or_fail(rows, args.figures)
    if had_read_error:
        return 1
    if any(row.get("decision_error") is True for row in rows):
        return 2
    return 0


def _has_malformed_value(analysis) -> bool:
    res = analysis.result
    # A clause whose value position failed numeric parsing leaves the
    # comparator present with no value.
    if res.p_comp is not None and res.reported_p is None and res.p_comp.value != "ns":
        return True
    if res.stat_comp is not None and res.stat_value is None and res.kind.value not in ("BetaSE",):
        return True
    return False


def _render_or_fail(rows: list[OutputRow], out_dir: str) -> None:
    try:
        render_figures(rows, out_dir)
    except ImportError:
        print(
            "statex: figure rendering requires matplotlib "
            "(pip install 'statex[figures]')",
            file=sys.stderr,
        )
        raise SystemExit(1)


def _write_output(payload: str, output: str | None) -> None:
    if output and output != "-":
        Path(output).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _conformance_command(args: argparse.Namespace) -> int:
    report = run_conformance()
    if args.format:
        rows = _conformance_rows(report)
        payload = emit(rows, args.format, ("case_id", "field", "expected", "actual", "lenient"))
        _write_output(payload, args.output)
        print(report.summary(), file=sys.stderr)
    else:
        print(report.summary())
        for diff in report.failures:
            print(
                "  case %d: %s expected %r, got %r"
                % (diff.case_id, diff.field, diff.expected, diff.actual)
            )
    if args.figures:
        _conformance_figures(report, args.figures)
    return 0 if report.passed else 1


def _conformance_rows(report) -> list[OutputRow]:
    columns = ("case_id", "field", "expected", "actual", "lenient")
    rows = []
    for diff in report.failures + report.lenient_diffs:
        rows.append(
            OutputRow(
                columns,
                {
                    "case_id": float(diff.case_id),
                    "field": diff.field,
                    "expected": None if diff.expected is None else str(diff.expected),
                    "actual": None if diff.actual is None else str(diff.actual),
                    "lenient": diff.lenient,
                },
            )
        )
    return rows


def _conformance_figures(report, out_dir: str) -> None:
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print(
            "statex: figure rendering requires matplotlib "
            "(pip install 'statex[figures]')",
            file=sys.stderr,
        )
        raise SystemExit(1)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    labels = ["detected", "p clauses", "recalculated"]
    achieved = [report.detected, report.p_detected, report.recalc_matches]
    targets = [report.total, report.p_expected, report.recalc_expected]
    fig, ax = plt.subplots(figsize=(6, 4))
    positions = range(len(labels))
    ax.bar([p - 0.2 for p in positions], targets, width=0.4, label="target", color="#8c8c8c")
    ax.bar([p + 0.2 for p in positions], achieved, width=0.4, label="achieved", color="#4878a8")
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels)
    ax.set_title("Conformance suite: %s" % ("pass" if report.passed else "fail"))
    ax.legend()
    fig.savefig(out / "statex_conformance.png", dpi=100)
    plt.close(fig)


def _corpus_command(args: argparse.Namespace) -> int:
    columns = ("id", "input", "lenient", "has_p_clause") + WIDE_COLUMNS[1:]
    rows = []
    for case in load_corpus():
        values: dict[str, float | str | bool | None] = {c: None for c in columns}
        values["id"] = case.id
        values["input"] = case.input
        values["lenient"] = case.lenient
        values["has_p_clause"] = case.has_p_clause
        for key, value in case.expected.items():
            values[key] = value
        rows.append(OutputRow(columns, values))
    payload = emit(rows, args.format, columns)
    _write_output(payload, args.output)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statex",
        description="Extract statistical test results from text and check "
        "reported p-values against recomputed ones.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="extract and check results from documents")
    check.add_argument("inputs", nargs="*", help="files, directories, or - for stdin")
    check.add_argument("--format", choices=("csv", "json"), default="csv")
    check.add_argument("--wide", action="store_true",
                       help="emit the per-family wide column layout")
    check.add_argument("--alpha", type=float, default=0.05)
    check.add_argument("--one-tailed-txt", action="store_true", dest="one_tailed_txt",
                       help="forgive errors that vanish at p/2 when the document "
                            "mentions one-tailed testing")
    check.add_argument("--assume-one-tailed", action="store_true", dest="assume_one_tailed",
                       help="recompute sign-symmetric statistics as one-tailed")
    check.add_argument("--strict-numbers", action="store_true",
                       help="treat malformed numeric tokens as a hard error")
    check.add_argument("--output", "-o", help="write the table here instead of stdout")
    check.add_argument("--figures", metavar="DIR",
                       help="render summary PNG figures into DIR")
    check.set_defaults(func=_check_command)

    conformance = sub.add_parser("conformance", help="run the embedded conformance suite")
    conformance.add_argument("--format", choices=("csv", "json"),
                             help="emit per-case diffs in this format")
    conformance.add_argument("--output", "-o")
    conformance.add_argument("--figures", metavar="DIR")
    conformance.set_defaults(func=_conformance_command)

    corpus = sub.add_parser("corpus", help="export the conformance corpus")
    corpus.add_argument("--format", choices=("csv", "json"), default="csv")
    corpus.add_argument("--output", "-o")
    corpus.set_defaults(func=_corpus_command)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except MalformedNumber as exc:
        print("statex: malformed number: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
