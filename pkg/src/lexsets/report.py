"""Deterministic output emitters: CSV/JSON tables and standalone SVG plots.

Rendering is a pure function of the input spec: no timestamps, no
randomness, fixed number formatting. Repeated runs produce byte-identical
artifacts, which makes the outputs diffable and testable as golden files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .analysis import AnalysisResult
from .corpus import ROLE_O, ROLE_S
from .errors import PlotSpecError
from .geometry import BoxStats

KINDS = ("box_whisker_panel", "median_by_rank", "ranking_comparison")

_MARKER_COLORS = ("#2ca02c", "#1f77b4", "#d62728", "#9467bd")
_FLOAT_DECIMALS = 6


@dataclass
class PlotSpec:
    kind: str
    title: str
    series: list
    width: int = 640
    height: int = 420
    x_label: str = ""
    y_label: str = ""


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _validate(spec: PlotSpec) -> None:
    if spec.kind not in KINDS:
        raise PlotSpecError(f"unknown plot kind {spec.kind!r}")
    if spec.width < 1 or spec.height < 1:
        raise PlotSpecError("plot dimensions must be positive")
    if not spec.series:
        raise PlotSpecError("plot series must be non-empty")
    if spec.kind == "box_whisker_panel":
        for item in spec.series:
            if not (isinstance(item, tuple) and len(item) == 2 and isinstance(item[1], BoxStats)):
                raise PlotSpecError("box_whisker_panel series items must be (label, BoxStats)")
    elif spec.kind == "median_by_rank":
        for item in spec.series:
            if not (isinstance(item, tuple) and len(item) == 3):
                raise PlotSpecError("median_by_rank series items must be (label, rank, median)")
    elif spec.kind == "ranking_comparison":
        label_sets = []
        for item in spec.series:
            if not (isinstance(item, tuple) and len(item) == 2 and item[1]):
                raise PlotSpecError("ranking_comparison series items must be (name, [(label, rank), ...])")
            label_sets.append({label for label, _ in item[1]})
        if any(labels != label_sets[0] for labels in label_sets[1:]):
            raise PlotSpecError("ranking_comparison series must cover the same labels")


def _ticks(low: float, high: float, count: int = 5) -> list[float]:
    if high <= low:
        high = low + 1.0
    raw_step = (high - low) / count
    magnitude = 10.0 ** math.floor(math.log10(raw_step))
    step = magnitude * min(n for n in (1.0, 2.0, 2.5, 5.0, 10.0) if raw_step / magnitude <= n)
    first = math.ceil(low / step - 1e-9) * step
    ticks = []
    index = 0
    while first + index * step <= high + step * 1e-9:
        ticks.append(round(first + index * step, 10))
        index += 1
    return ticks or [low, high]


class _Canvas:
    """Accumulates SVG elements inside a margin-framed plot area."""

    def __init__(self, spec: PlotSpec):
        self.width = spec.width
        self.height = spec.height
        self.margin_left = 60
        self.margin_right = 20
        self.margin_top = 40
        self.margin_bottom = 55
        self.plot_w = self.width - self.margin_left - self.margin_right
        self.plot_h = self.height - self.margin_top - self.margin_bottom
        self.parts: list[str] = []
        self.parts.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">'
        )
        self.parts.append(f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>')
        self.parts.append(
            f'<text x="{_fmt(self.width / 2)}" y="22" font-size="15" text-anchor="middle" '
            f'font-family="sans-serif">{_escape(spec.title)}</text>'
        )

    def x_pos(self, fraction: float) -> float:
        return self.margin_left + fraction * self.plot_w

    def y_pos(self, fraction: float) -> float:
        return self.margin_top + (1.0 - fraction) * self.plot_h

    def draw_frame(self, x_label: str, y_label: str) -> None:
        x0, y0 = self.margin_left, self.margin_top
        x1, y1 = self.margin_left + self.plot_w, self.margin_top + self.plot_h
        self.parts.append(
            f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="#333333" stroke-width="1"/>'
        )
        self.parts.append(
            f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="#333333" stroke-width="1"/>'
        )
        if x_label:
            self.parts.append(
                f'<text x="{_fmt((x0 + x1) / 2)}" y="{self.height - 8}" font-size="12" '
                f'text-anchor="middle" font-family="sans-serif">{_escape(x_label)}</text>'
            )
        if y_label:
            cy = (y0 + y1) / 2
            self.parts.append(
                f'<text transform="translate(14,{_fmt(cy)}) rotate(-90)" font-size="12" '
                f'text-anchor="middle" font-family="sans-serif">{_escape(y_label)}</text>'
            )

    def y_axis(self, low: float, high: float) -> float:
        """Draw tick marks and labels; returns the axis span."""
        span = high - low if high > low else 1.0
        for tick in _ticks(low, low + span):
            y = self.y_pos((tick - low) / span)
            self.parts.append(
                f'<line x1="{self.margin_left - 4}" y1="{_fmt(y)}" x2="{self.margin_left}" '
                f'y2="{_fmt(y)}" stroke="#333333" stroke-width="1"/>'
            )
            self.parts.append(
                f'<text x="{self.margin_left - 8}" y="{_fmt(y + 4)}" font-size="10" '
                f'text-anchor="end" font-family="sans-serif">{tick:g}</text>'
            )
        return span

    def x_category_centers(self, labels: Sequence[str]) -> list[float]:
        n = len(labels)
        centers = []
        for i, label in enumerate(labels):
            cx = self.x_pos((i + 0.5) / n)
            centers.append(cx)
            self.parts.append(
                f'<text x="{_fmt(cx)}" y="{self.margin_top + self.plot_h + 16}" font-size="10" '
                f'text-anchor="middle" font-family="sans-serif">{_escape(label)}</text>'
            )
        return centers

    def finish(self) -> str:
        self.parts.append("</svg>")
        return "\n".join(self.parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _render_box_panel(spec: PlotSpec) -> str:
    canvas = _Canvas(spec)
    boxes: list[tuple[str, BoxStats]] = spec.series
    high = max(b.maximum for _, b in boxes)
    low = min(0.0, min(b.minimum for _, b in boxes))
    span = canvas.y_axis(low, low + (high - low) * 1.05)
    canvas.draw_frame(spec.x_label, spec.y_label)
    centers = canvas.x_category_centers([label for label, _ in boxes])
    half_width = min(30.0, canvas.plot_w / (len(boxes) * 4))

    def y_of(value: float) -> float:
        return canvas.y_pos((value - low) / span)

    for (label, stats), cx in zip(boxes, centers):
        top, bottom = y_of(stats.q3), y_of(stats.q1)
        group = [f'<g class="box" data-label="{_escape(label)}">']
        group.append(
            f'<line x1="{_fmt(cx)}" y1="{_fmt(y_of(stats.whisker_high))}" x2="{_fmt(cx)}" '
            f'y2="{_fmt(top)}" stroke="#333333" stroke-width="1"/>'
        )
        group.append(
            f'<line x1="{_fmt(cx)}" y1="{_fmt(bottom)}" x2="{_fmt(cx)}" '
            f'y2="{_fmt(y_of(stats.whisker_low))}" stroke="#333333" stroke-width="1"/>'
        )
        for whisker in (stats.whisker_high, stats.whisker_low):
            group.append(
                f'<line x1="{_fmt(cx - half_width / 2)}" y1="{_fmt(y_of(whisker))}" '
                f'x2="{_fmt(cx + half_width / 2)}" y2="{_fmt(y_of(whisker))}" '
                f'stroke="#333333" stroke-width="1"/>'
            )
        group.append(
            f'<rect x="{_fmt(cx - half_width)}" y="{_fmt(top)}" width="{_fmt(2 * half_width)}" '
            f'height="{_fmt(max(bottom - top, 0.5))}" fill="#9ecae1" stroke="#333333" stroke-width="1"/>'
        )
        group.append(
            f'<line x1="{_fmt(cx - half_width)}" y1="{_fmt(y_of(stats.median))}" '
            f'x2="{_fmt(cx + half_width)}" y2="{_fmt(y_of(stats.median))}" '
            f'stroke="#d62728" stroke-width="2"/>'
        )
        if stats.outlier_count:
            group.append(
                f'<text x="{_fmt(cx)}" y="{_fmt(y_of(stats.whisker_high) - 6)}" font-size="9" '
                f'text-anchor="middle" font-family="sans-serif">{stats.outlier_count} outl.</text>'
            )
        group.append("</g>")
        canvas.parts.append("".join(group))
    return canvas.finish()


def _render_median_by_rank(spec: PlotSpec) -> str:
    canvas = _Canvas(spec)
    points = sorted(spec.series, key=lambda item: item[1])
    values = [v for _, _, v in points]
    low = min(0.0, min(values))
    span = canvas.y_axis(low, low + (max(values) - low) * 1.05)
    canvas.draw_frame(spec.x_label, spec.y_label)
    centers = canvas.x_category_centers([label for label, _, _ in points])
    coords = [
        (cx, canvas.y_pos((value - low) / span)) for cx, (_, _, value) in zip(centers, points)
    ]
    path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in coords)
    canvas.parts.append(f'<polyline points="{path}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>')
    for x, y in coords:
        canvas.parts.append(
            f'<circle class="marker" cx="{_fmt(x)}" cy="{_fmt(y)}" r="3.5" fill="#1f77b4"/>'
        )
    return canvas.finish()


def _marker_element(shape_index: int, x: float, y: float, color: str) -> str:
    size = 5.0
    if shape_index == 0:  # triangle
        points = f"{_fmt(x)},{_fmt(y - size)} {_fmt(x - size)},{_fmt(y + size)} {_fmt(x + size)},{_fmt(y + size)}"
        return f'<polygon class="marker" points="{points}" fill="{color}"/>'
    if shape_index == 1:  # square
        return (
            f'<rect class="marker" x="{_fmt(x - size + 1)}" y="{_fmt(y - size + 1)}" '
            f'width="{_fmt(2 * size - 2)}" height="{_fmt(2 * size - 2)}" fill="{color}"/>'
        )
    return f'<circle class="marker" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="{color}"/>'


def _render_ranking_comparison(spec: PlotSpec) -> str:
    canvas = _Canvas(spec)
    first_name, first_points = spec.series[0]
    order = [label for label, _ in sorted(first_points, key=lambda item: item[1])]
    all_ranks = [rank for _, points in spec.series for _, rank in points]
    low = 0.0
    span = canvas.y_axis(low, max(all_ranks) * 1.05)
    canvas.draw_frame(spec.x_label, spec.y_label)
    centers = dict(zip(order, canvas.x_category_centers(order)))
    for index, (name, points) in enumerate(spec.series):
        color = _MARKER_COLORS[index % len(_MARKER_COLORS)]
        for label, rank in sorted(points, key=lambda item: order.index(item[0])):
            canvas.parts.append(
                _marker_element(index, centers[label], canvas.y_pos((rank - low) / span), color)
            )
        legend_y = canvas.margin_top + 14 * index
        canvas.parts.append(
            _marker_element(index, canvas.margin_left + canvas.plot_w - 110, legend_y, color)
        )
        canvas.parts.append(
            f'<text x="{_fmt(canvas.margin_left + canvas.plot_w - 100)}" y="{_fmt(legend_y + 4)}" '
            f'font-size="10" font-family="sans-serif">{_escape(name)}</text>'
        )
    return canvas.finish()


def render_svg(spec: PlotSpec) -> str:
    """Render a plot spec to a standalone SVG document string."""
    _validate(spec)
    if spec.kind == "box_whisker_panel":
        return _render_box_panel(spec)
    if spec.kind == "median_by_rank":
        return _render_median_by_rank(spec)
    return _render_ranking_comparison(spec)


def _round_cell(value):
    if isinstance(value, float):
        return round(value, _FLOAT_DECIMALS)
    return value


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{_FLOAT_DECIMALS}f}"
    return str(value)


def emit_tables(rows: Sequence[Mapping], columns: Sequence[str]) -> tuple[str, str]:
    """Render rows as (CSV text, JSON text) with matching 6-decimal numbers."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(column)) for column in columns])
    json_rows = [{column: _round_cell(row.get(column)) for column in columns} for row in rows]
    return buffer.getvalue(), json.dumps(json_rows, ensure_ascii=False, indent=2) + "\n"


GEOMETRY_COLUMNS = [
    "verb", "role", "covered_tokens", "oov_tokens", "oov_types",
    "minimum", "q1", "median", "q3", "maximum",
    "whisker_low", "whisker_high", "outlier_count",
]

ANALYSIS_COLUMNS = [
    "verb", "gloss", "spontaneity_rank", "s_median", "o_median",
    "centroid_distance", "weighted_overlap",
    "reference_rank", "distance_rank", "overlap_rank",
]


def geometry_rows(result: AnalysisResult) -> list[dict]:
    rows = []
    for (verb, role), geometry in sorted(
        result.geometries.items(), key=lambda kv: (kv[0][0], kv[0][1] != ROLE_S)
    ):
        stats = result.boxes[(verb, role)]
        row = {
            "verb": verb,
            "role": role,
            "covered_tokens": geometry.covered_tokens,
            "oov_tokens": geometry.oov_tokens,
            "oov_types": geometry.oov_types,
        }
        row.update(stats.as_dict())
        rows.append(row)
    return rows


def geometry_documents(result: AnalysisResult, *, verbose: bool = False) -> tuple[str, str]:
    """Geometry report as (CSV, JSON); verbose adds per-filler distance tables to the JSON."""
    rows = geometry_rows(result)
    csv_text, json_text = emit_tables(rows, GEOMETRY_COLUMNS)
    if verbose:
        enriched = json.loads(json_text)
        for row in enriched:
            geometry = result.geometries[(row["verb"], row["role"])]
            row["fillers"] = [
                {"lemma": lemma, "distance": round(distance, _FLOAT_DECIMALS), "weight": weight}
                for lemma, distance, weight in geometry.filler_distances
            ]
        json_text = json.dumps(enriched, ensure_ascii=False, indent=2) + "\n"
    return csv_text, json_text


def analysis_rows(result: AnalysisResult) -> list[dict]:
    return [
        {
            "verb": v.lemma,
            "gloss": v.gloss,
            "spontaneity_rank": v.spontaneity_rank,
            "s_median": v.s_median,
            "o_median": v.o_median,
            "centroid_distance": v.centroid_distance,
            "weighted_overlap": v.weighted_overlap,
            "reference_rank": v.reference_rank,
            "distance_rank": v.distance_rank,
            "overlap_rank": v.overlap_rank,
        }
        for v in result.verbs
    ]


def _correlation_obj(correlation) -> dict | None:
    if correlation is None:
        return None
    obj = correlation.as_dict()
    obj["rho"] = round(obj["rho"], _FLOAT_DECIMALS)
    obj["p_value"] = round(obj["p_value"], _FLOAT_DECIMALS)
    return obj


def _split_obj(split: tuple[float, float] | None) -> dict | None:
    if split is None:
        return None
    return {
        "low_half_avg": round(split[0], _FLOAT_DECIMALS),
        "high_half_avg": round(split[1], _FLOAT_DECIMALS),
    }


def analysis_documents(result: AnalysisResult) -> tuple[str, str]:
    """Analysis report as (CSV of per-verb rows, JSON with global statistics)."""
    rows = analysis_rows(result)
    csv_text, rows_json = emit_tables(rows, ANALYSIS_COLUMNS)
    document = {
        "verbs": json.loads(rows_json),
        "excluded": result.excluded,
        "correlations": {
            "distance_vs_reference": _correlation_obj(result.distance_correlation),
            "overlap_vs_reference": _correlation_obj(result.overlap_correlation),
        },
        "split_half_medians": {
            ROLE_S: _split_obj(result.s_split_half),
            ROLE_O: _split_obj(result.o_split_half),
        },
        "notes": result.notes,
    }
    return csv_text, json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def figure_specs(result: AnalysisResult) -> dict[str, PlotSpec]:
    """Plot specs for every output figure, keyed by file suffix."""
    specs: dict[str, PlotSpec] = {}
    verbs = sorted({verb for verb, _ in result.geometries})
    for verb in verbs:
        series = [
            (role, result.boxes[(verb, role)])
            for role in (ROLE_S, ROLE_O)
            if (verb, role) in result.boxes
        ]
        specs[f"fig1_{verb}"] = PlotSpec(
            kind="box_whisker_panel",
            title=f"Distance of fillers from their centroid: {verb}",
            series=series,
            x_label="argument set",
            y_label="cosine distance from centroid",
        )
    for role, attr in ((ROLE_S, "s_median"), (ROLE_O, "o_median")):
        series = [(v.lemma, v.spontaneity_rank, getattr(v, attr)) for v in result.verbs]
        if series:
            specs[f"fig2_{role}"] = PlotSpec(
                kind="median_by_rank",
                title=f"Median centroid distance in {role} by spontaneity rank",
                series=series,
                x_label="verbs (least to most spontaneous)",
                y_label="median cosine distance",
            )
    if result.verbs:
        reference_series = [(v.lemma, v.reference_rank) for v in result.verbs]
        distance_series = [(v.lemma, v.distance_rank) for v in result.verbs]
        specs["fig3"] = PlotSpec(
            kind="ranking_comparison",
            title="Reference ranking vs centroid-distance ranking",
            series=[("reference", reference_series), ("centroid distance", distance_series)],
            x_label="verbs (reference order)",
            y_label="rank position",
        )
    return specs
