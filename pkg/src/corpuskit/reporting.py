"""Rendering of evaluation results as TSV or aligned human-readable tables.

Scores render to two decimals; run aggregates render as ``mean ±std``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .metrics import ClassificationReport, PrfScore, RunAggregate

PRF_COLUMNS = ("class", "precision", "recall", "f1", "support")


def format_aggregate(aggregate: RunAggregate) -> str:
    return f"{aggregate.mean:.2f} ±{aggregate.std:.2f}"


def _render_rows(header: Sequence[str], rows: list[Sequence[str]], fmt: str) -> str:
    if fmt == "tsv":
        lines = ["\t".join(header)] + ["\t".join(row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "human":
        widths = [len(h) for h in header]
        for row in rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        for row in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def render_prf_table(
    per_class: Mapping[str, PrfScore],
    support: Mapping[str, int],
    fmt: str = "tsv",
) -> str:
    rows = []
    for name in sorted(per_class):
        score = per_class[name]
        rows.append(
            (
                name,
                f"{score.precision:.2f}",
                f"{score.recall:.2f}",
                f"{score.f1:.2f}",
                str(support.get(name, 0)),
            )
        )
    return _render_rows(PRF_COLUMNS, rows, fmt)


def render_confusion_csv(report: ClassificationReport) -> str:
    header = "," + ",".join(report.classes)
    lines = [header]
    for gold in report.classes:
        cells = [str(report.confusion.get((gold, pred), 0)) for pred in report.classes]
        lines.append(gold + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def render_score_rows(rows: Sequence[tuple[str, str]], fmt: str = "tsv") -> str:
    """Named score rows, e.g. dataset scores or aggregate summaries."""
    return _render_rows(("name", "score"), [list(r) for r in rows], fmt)
