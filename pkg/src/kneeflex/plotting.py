"""SVG rendering of a counted session: centered angles, troughs, threshold.

The plot is written as hand-built SVG so every element stays an
addressable node: the data polyline has class ``angle-series``, each
repetition marker is a ``circle.rep-marker`` carrying its data
coordinates in ``data-frame``/``data-value`` attributes, and the depth
threshold is a ``line.threshold`` with its data value in
``data-value``. The root element records the data-to-pixel mapping in
``data-*`` attributes so consumers can verify coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .counter import CenteredSeries, CounterParams, ExerciseIndex

WIDTH = 960
HEIGHT = 480
PLOT_BOX = (70, 50, 930, 440)  # x0, y0, x1, y1 in pixels


@dataclass(frozen=True)
class PlotMapping:
    """Linear map from (frame, value) data space to pixel space."""

    frame_min: float
    frame_max: float
    value_min: float
    value_max: float
    box: tuple[float, float, float, float] = PLOT_BOX

    def x(self, frame: float) -> float:
        x0, _, x1, _ = self.box
        span = self.frame_max - self.frame_min
        if span == 0:
            return (x0 + x1) / 2
        return x0 + (frame - self.frame_min) / span * (x1 - x0)

    def y(self, value: float) -> float:
        _, y0, _, y1 = self.box
        span = self.value_max - self.value_min
        if span == 0:
            return (y0 + y1) / 2
        return y1 - (value - self.value_min) / span * (y1 - y0)


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render_plot(
    series: CenteredSeries,
    index: ExerciseIndex,
    out_path,
    params: CounterParams | None = None,
    normalize: bool = False,
) -> None:
    """Write the counting plot for a centered series as an SVG file.

    ``normalize`` divides the display by the series std (unit-variance
    view); it only rescales the drawing, never the counting results.
    The marker count always equals ``index.count``.
    """
    params = params or CounterParams()
    scale = 1.0 / series.std if normalize and series.std > 0 else 1.0
    values = series.values * scale
    threshold_value = -series.std * params.std_threshold * scale

    frames = series.frame_index
    frame_min = float(frames.min()) if len(series) else 0.0
    frame_max = float(frames.max()) if len(series) else 1.0
    lo = min(float(values.min()) if len(series) else 0.0, threshold_value, 0.0)
    hi = max(float(values.max()) if len(series) else 0.0, 0.0)
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    mapping = PlotMapping(frame_min, frame_max, lo - pad, hi + pad)

    unit = "std units" if normalize and series.std > 0 else "deg"
    title = f"Detected repetitions: {index.count}"
    x0, y0, x1, y1 = PLOT_BOX
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" data-frame-min="{_fmt(frame_min)}" '
        f'data-frame-max="{_fmt(frame_max)}" data-value-min="{_fmt(mapping.value_min)}" '
        f'data-value-max="{_fmt(mapping.value_max)}" '
        f'data-plot-box="{x0},{y0},{x1},{y1}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text class="plot-title" x="{WIDTH / 2}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(title)}</text>',
        f'<line class="axis" x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text class="axis-label" x="{(x0 + x1) / 2}" y="{HEIGHT - 8}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">frame index</text>',
        f'<text class="axis-label" x="16" y="{(y0 + y1) / 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(y0 + y1) / 2})">centered knee angle ({unit})</text>',
    ]

    ty = mapping.y(threshold_value)
    parts.append(
        f'<line class="threshold" x1="{x0}" y1="{_fmt(ty)}" x2="{x1}" y2="{_fmt(ty)}" '
        f'stroke="#d62728" stroke-dasharray="6 4" data-value="{threshold_value!r}"/>'
    )

    if len(series):
        points = " ".join(
            f"{_fmt(mapping.x(f))},{_fmt(mapping.y(v))}" for f, v in zip(frames, values)
        )
        parts.append(
            f'<polyline class="angle-series" fill="none" stroke="#1f77b4" '
            f'stroke-width="1.5" points="{points}"/>'
        )

    for rep in index.reps:
        cx = mapping.x(rep.frame_index)
        cy = mapping.y(rep.peak_depth_deg * scale)
        parts.append(
            f'<circle class="rep-marker" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="5" '
            f'fill="none" stroke="#2ca02c" stroke-width="2" '
            f'data-frame="{rep.frame_index}" data-value="{rep.peak_depth_deg * scale!r}"/>'
        )

    parts.append("</svg>")
    Path(out_path).write_text("\n".join(parts), encoding="utf-8")
