"""Run-record CSV handling, median aggregation and a hand-written SVG line plot."""
from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence
from xml.sax.saxutils import escape

CSV_COLUMNS = [
    "instance", "n", "m", "dim", "model", "separation", "objective", "bound",
    "status", "seconds", "nodes", "cuts_asym", "cuts_conn", "cuts_cpc", "cuts_star",
]
AGG_COLUMNS = ["group", "model", "separation", "runs", "finished", "median_seconds", "shown"]
SERIES = [
    ("basic", "integer"),
    ("basic", "fractional"),
    ("strengthened", "integer"),
    ("strengthened", "fractional"),
]
COLORS = {
    ("basic", "integer"): "#1f77b4",
    ("basic", "fractional"): "#ff7f0e",
    ("strengthened", "integer"): "#2ca02c",
    ("strengthened", "fractional"): "#d62728",
}


class ReportError(ValueError):
    pass


def read_records(paths: Sequence[str]) -> list[dict[str, str]]:
    if not paths:
        raise ReportError("no CSV inputs given")
    rows: list[dict[str, str]] = []
    header = None
    for path in paths:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if header is None:
                header = reader.fieldnames
            elif reader.fieldnames != header:
                raise ReportError(f"{path}: header differs from the first input")
            if reader.fieldnames != CSV_COLUMNS:
                raise ReportError(f"{path}: unexpected columns {reader.fieldnames}")
            rows.extend(reader)
    if not rows:
        raise ReportError("inputs contain no records")
    return rows


@dataclass
class Aggregate:
    group: int
    model: str
    separation: str
    runs: int
    finished: int
    median_seconds: float | None

    @property
    def shown(self) -> bool:
        # strictly more than half of the runs must have finished
        return 2 * self.finished > self.runs


def aggregate(rows: Iterable[dict[str, str]], group_by: str = "dim") -> list[Aggregate]:
    """Median wall time per (group, variant); unfinished runs count as +inf."""
    buckets: dict[tuple[int, str, str], list[float]] = {}
    for r in rows:
        if group_by == "dim":
            key = int(r["dim"]) // 10
        elif group_by == "n":
            key = int(r["n"])
        else:
            raise ReportError(f"unknown grouping {group_by!r}")
        t = float(r["seconds"]) if r["status"] == "Optimal" else math.inf
        buckets.setdefault((key, r["model"], r["separation"]), []).append(t)
    out = []
    for (key, model, sep), times in sorted(buckets.items()):
        finished = sum(1 for t in times if math.isfinite(t))
        med = statistics.median(times) if 2 * finished > len(times) else None
        out.append(Aggregate(key, model, sep, len(times), finished, med))
    return out


def write_aggregate(path: str, aggs: Sequence[Aggregate]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(AGG_COLUMNS)
        for a in aggs:
            med = "" if a.median_seconds is None else f"{a.median_seconds:.6f}"
            w.writerow([a.group, a.model, a.separation, a.runs, a.finished, med, int(a.shown)])


def render_svg(aggs: Sequence[Aggregate], x_label: str = "floor(dim / 10)") -> str:
    """800x600 line plot, one series per variant present, suppressed points left out."""
    width, height = 800, 600
    left, right, top, bottom = 80, 200, 40, 70
    pw, ph = width - left - right, height - top - bottom
    series: dict[tuple[str, str], list[tuple[int, float | None]]] = {}
    for a in aggs:
        series.setdefault((a.model, a.separation), []).append((a.group, a.median_seconds))
    xs = [a.group for a in aggs] or [0]
    ys = [a.median_seconds for a in aggs if a.median_seconds is not None] or [1.0]
    x0, x1 = min(xs), max(xs)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    y1 = max(ys) * 1.1 or 1.0

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - y / y1 * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
        f'<text x="{left + pw / 2}" y="{height - 20}" text-anchor="middle" '
        f'font-size="14">{escape(x_label)}</text>',
        f'<text x="20" y="{top + ph / 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {top + ph / 2})">median seconds</text>',
    ]
    for x in sorted(set(xs)):
        out.append(
            f'<text x="{px(x):.1f}" y="{top + ph + 20}" text-anchor="middle" font-size="12">{x}</text>'
        )
    for i in range(5):
        y = y1 * i / 4
        out.append(
            f'<text x="{left - 8}" y="{py(y) + 4:.1f}" text-anchor="end" font-size="12">{y:.3g}</text>'
        )
    order = [s for s in SERIES if s in series] + sorted(s for s in series if s not in SERIES)
    for idx, key in enumerate(order):
        color = COLORS.get(key, "#555555")
        pts = sorted(series[key])
        segment: list[str] = []
        segments = []
        for x, y in pts:
            if y is None:
                if segment:
                    segments.append(segment)
                segment = []
                continue
            segment.append(f"{px(x):.1f},{py(y):.1f}")
        if segment:
            segments.append(segment)
        name = f"{key[0]} / {key[1]}"
        out.append(f'<g class="series" data-series="{escape(name)}">')
        for seg in segments:
            out.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{" ".join(seg)}"/>'
            )
        for x, y in pts:
            if y is not None:
                out.append(
                    f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="{color}" '
                    f'data-group="{x}" data-median="{y:.6f}"/>'
                )
        out.append("</g>")
        ly = top + 20 + 22 * idx
        out.append(
            f'<line x1="{left + pw + 20}" y1="{ly}" x2="{left + pw + 45}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{left + pw + 52}" y="{ly + 4}" font-size="13">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
