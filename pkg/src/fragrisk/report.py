"""Tabular scenario reports with deterministic CSV / JSON / SVG emission.

Every CLI subcommand produces a ScenarioReport: named columns over rows of
cells, plus metadata (command, config hash, seed, version).  Emission is
byte-deterministic for identical inputs: no timestamps, fixed float
formatting (17 significant digits unless narrowed), sorted metadata.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

from . import __version__

Cell = float | int | str


def format_number(value: Cell, digits: int | None) -> str:
    if isinstance(value, bool):  # bools are ints; keep them readable
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, f".{digits or 17}g")
    return str(value)


@dataclass
class ScenarioReport:
    """Named numeric columns over rows, with reproducibility metadata."""

    command: str
    columns: list[str]
    rows: list[list[Cell]]
    seed: int | None = None
    config_hash: str | None = None
    extra_metadata: dict[str, Cell] = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row width {len(row)} != {len(self.columns)} columns")

    def metadata(self) -> dict[str, Cell]:
        meta: dict[str, Cell] = {"command": self.command, "version": __version__}
        if self.seed is not None:
            meta["seed"] = self.seed
        if self.config_hash is not None:
            meta["config_hash"] = self.config_hash
        meta.update(self.extra_metadata)
        return meta

    def to_csv(self, digits: int | None = None) -> str:
        out = io.StringIO()
        for key, value in sorted(self.metadata().items()):
            out.write(f"# {key}: {value}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(format_number(cell, digits) for cell in row) + "\n")
        return out.getvalue()

    def to_json(self, digits: int | None = None) -> str:
        def cell(value: Cell):
            if isinstance(value, float) and digits:
                return float(format(value, f".{digits}g"))
            return value

        doc = {
            "metadata": self.metadata(),
            "columns": self.columns,
            "rows": [[cell(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def render(self, fmt: str, digits: int | None = None) -> str:
        if fmt == "csv":
            return self.to_csv(digits)
        if fmt == "json":
            return self.to_json(digits)
        raise ValueError(f"unknown output format {fmt!r}")


def svg_line_chart(
    report: ScenarioReport,
    x_column: str,
    y_columns: list[str] | None = None,
    title: str | None = None,
    width: int = 640,
    height: int = 480,
) -> str:
    """Static SVG line chart of ``y_columns`` against ``x_column``.

    Write-only convenience for the figure-reproduction subcommands; never
    parsed back.  Deterministic output (fixed coordinate formatting).
    """
    if x_column not in report.columns:
        raise ValueError(f"unknown x column {x_column!r}")
    if y_columns is None:
        y_columns = [c for c in report.columns if c != x_column]
    xi = report.columns.index(x_column)
    series = {}
    xs = [float(row[xi]) for row in report.rows]
    for name in y_columns:
        yi = report.columns.index(name)
        series[name] = [float(row[yi]) for row in report.rows]

    margin = 50.0
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    x_min, x_max = min(xs), max(xs)
    all_y = [v for vals in series.values() for v in vals]
    y_min, y_max = min(all_y), max(all_y)
    x_span = (x_max - x_min) or 1.0
    y_span = (y_max - y_min) or 1.0

    def px(x: float) -> float:
        return margin + (x - x_min) / x_span * plot_w

    def py(y: float) -> float:
        return height - margin - (y - y_min) / y_span * plot_h

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{margin}" y="{height - margin + 20}" font-size="12">{x_min:.6g}</text>',
        f'<text x="{width - margin}" y="{height - margin + 20}" font-size="12" '
        f'text-anchor="end">{x_max:.6g}</text>',
        f'<text x="{margin - 5}" y="{height - margin}" font-size="12" '
        f'text-anchor="end">{y_min:.6g}</text>',
        f'<text x="{margin - 5}" y="{margin + 10}" font-size="12" text-anchor="end">{y_max:.6g}</text>',
        f'<text x="{margin - 5}" y="{height - margin + 20}" font-size="12" '
        f'text-anchor="end">{x_column}</text>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="25" font-size="14" text-anchor="middle">{title}</text>'
        )
    for i, (name, ys) in enumerate(series.items()):
        color = palette[i % len(palette)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>')
        parts.append(
            f'<text x="{width - margin - 5}" y="{margin + 15 + 15 * i}" font-size="12" '
            f'text-anchor="end" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
