"""Augmented replay: stick-figure overlay plus a growing side plot.

The output frame is the source frame with a plot panel appended on the
right. Per frame it shows the skeleton segments (hip-knee, knee-ankle,
ankle-foot per side), the current knee angles as text, the angle curve
drawn up to the current frame on a fixed full-session axis, and
repetition markers. Anything associated with an alerted knee is drawn
in the unsafe color, and a status box in the panel's top-left corner
mirrors the frame's overall alert state so downstream tooling can
sample it.
"""

from __future__ import annotations

import csv
from pathlib import Path

import cv2
import numpy as np

from .config import METRICS_COLUMNS, AlignmentError, CaptureConfig
from .extract import open_video

PANEL_WIDTH = 320
STATUS_BOX = 20  # px square at the panel's top-left
CURVE_COLOR = (200, 200, 200)
MARKER_COLOR = (80, 200, 240)

SEGMENTS = (("hip", "knee"), ("knee", "ankle"), ("ankle", "foot_index"))


def status_box_slices(video_width: int) -> tuple[slice, slice]:
    """(row, column) slices of the alert status box in an output frame."""
    return slice(0, STATUS_BOX), slice(video_width, video_width + STATUS_BOX)


def _float_or_none(cell: str) -> float | None:
    cell = (cell or "").strip()
    if not cell:
        return None
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if np.isfinite(value) else None


def read_metrics_rows(path) -> dict[int, dict]:
    """Read a metrics CSV into {frame_index: row dict}; schema-checked."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in METRICS_COLUMNS:
            if column not in header:
                raise ValueError(f"{path}: metrics header is missing column '{column}'")
        rows = {}
        for row in reader:
            frame_index = int(float(row["frame"]))
            rows[frame_index] = {
                "left": _float_or_none(row["left_knee_angle_deg"]),
                "right": _float_or_none(row["right_knee_angle_deg"]),
                "alert_left": row["sag_alert_l"].strip() == "1"
                or row["front_alert_l"].strip() == "1",
                "alert_right": row["sag_alert_r"].strip() == "1"
                or row["front_alert_r"].strip() == "1",
            }
    return rows


def read_pose_points(path) -> dict[int, dict[str, tuple[float, float]]]:
    """Read a pose CSV into per-frame normalized (x, y) points per slot."""
    path = Path(path)
    frames: dict[int, dict[str, tuple[float, float]]] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            points = {}
            for side in ("l", "r"):
                for joint in ("hip", "knee", "ankle", "foot_index"):
                    slot = f"{side}_{joint}"
                    x = _float_or_none(row.get(f"{slot}_x", ""))
                    y = _float_or_none(row.get(f"{slot}_y", ""))
                    if x is not None and y is not None:
                        points[slot] = (x, y)
            frames[int(float(row["frame"]))] = points
    return frames


def _check_alignment(metrics: dict[int, dict], n_frames: int) -> None:
    indices = sorted(metrics)
    for frame_index in indices:
        if frame_index >= n_frames:
            raise AlignmentError(
                f"metrics row for frame {frame_index} has no matching video frame "
                f"(video has {n_frames} frames)"
            )


def _draw_skeleton(frame, points, row, config: CaptureConfig) -> None:
    height, width = frame.shape[:2]
    for side, alert_key in (("l", "alert_left"), ("r", "alert_right")):
        alerted = bool(row and row[alert_key])
        color = config.unsafe_color if alerted else config.safe_color
        for joint_a, joint_b in SEGMENTS:
            a = points.get(f"{side}_{joint_a}")
            b = points.get(f"{side}_{joint_b}")
            if a is None or b is None:
                continue
            pa = (int(a[0] * width), int(a[1] * height))
            pb = (int(b[0] * width), int(b[1] * height))
            cv2.line(frame, pa, pb, color, 2, cv2.LINE_AA)
            cv2.circle(frame, pa, 3, color, -1, cv2.LINE_AA)
            cv2.circle(frame, pb, 3, color, -1, cv2.LINE_AA)


def _angle_text(row) -> str:
    def fmt(value):
        return f"{value:5.1f}" if value is not None else "  ---"

    if row is None:
        return "L   --- R   ---"
    return f"L {fmt(row['left'])} R {fmt(row['right'])}"


class _Panel:
    """Fixed full-session plot of the right-knee angle, drawn incrementally."""

    def __init__(self, metrics: dict[int, dict], n_frames: int, height: int, rep_frames):
        self.n_frames = max(n_frames, 1)
        self.height = height
        self.rep_frames = set(int(f) for f in rep_frames)
        values = [row["right"] for row in metrics.values() if row["right"] is not None]
        lo = min(values) if values else 0.0
        hi = max(values) if values else 180.0
        pad = 0.05 * (hi - lo) if hi > lo else 5.0
        self.lo, self.hi = lo - pad, hi + pad
        self.top, self.bottom = STATUS_BOX + 12, height - 16
        self._init_canvas(height)

    def x(self, frame_index: int) -> int:
        usable = PANEL_WIDTH - 20
        return 10 + int(frame_index / max(self.n_frames - 1, 1) * usable)

    def y(self, value: float) -> int:
        span = self.hi - self.lo
        fraction = (value - self.lo) / span if span else 0.5
        return int(self.bottom - fraction * (self.bottom - self.top))

    def _init_canvas(self, height: int) -> None:
        self._canvas = np.full((height, PANEL_WIDTH, 3), 24, dtype=np.uint8)
        self._previous: tuple[int, int] | None = None

    def advance(self, metrics, frame_index: int, config: CaptureConfig):
        """Draw this frame's curve segment onto the growing plot."""
        row = metrics.get(frame_index)
        if row is None or row["right"] is None:
            self._previous = None
            return self._canvas
        point = (self.x(frame_index), self.y(row["right"]))
        alerted = row["alert_left"] or row["alert_right"]
        color = config.unsafe_color if alerted else CURVE_COLOR
        if self._previous is not None:
            cv2.line(self._canvas, self._previous, point, color, 1, cv2.LINE_AA)
        else:
            cv2.circle(self._canvas, point, 1, color, -1, cv2.LINE_AA)
        self._previous = point
        if frame_index in self.rep_frames:
            cv2.circle(self._canvas, point, 4, MARKER_COLOR, -1, cv2.LINE_AA)
        return self._canvas


def render_augmented_replay(
    video_path,
    metrics_csv_path,
    rep_frames=(),
    config: CaptureConfig | None = None,
    out_path=None,
) -> Path:
    """Render the augmented replay video; returns the output path.

    ``config.output_csv_path`` must point at the pose CSV extracted from
    the same video (the skeleton geometry); ``metrics_csv_path`` at the
    analysis output aligned by frame_index. The output has exactly as
    many frames as the source. Raises AlignmentError if a metrics row
    refers to a frame the video does not have.
    """
    if config is None:
        raise ValueError("config is required (it carries the pose CSV path and colors)")
    out_path = Path(out_path or config.overlay_path or Path(video_path).with_suffix(".replay.mp4"))
    metrics = read_metrics_rows(metrics_csv_path)
    pose_points = read_pose_points(config.output_csv_path)

    cap, fps, count_hint = open_video(video_path)
    ok, first = cap.read()
    if not ok:
        cap.release()
        raise IOError(f"video has no frames: {video_path}")
    height, width = first.shape[:2]
    n_frames_hint = count_hint if count_hint > 0 else len(pose_points)
    _check_alignment(metrics, max(n_frames_hint, 1))

    fourcc = "MJPG" if out_path.suffix.lower() == ".avi" else "mp4v"
    writer = cv2.VideoWriter(
        str(out_path), cv2.VideoWriter_fourcc(*fourcc), fps, (width + PANEL_WIDTH, height)
    )
    if not writer.isOpened():
        cap.release()
        raise IOError(f"cannot open video writer for {out_path}")

    panel = _Panel(metrics, n_frames_hint, height, rep_frames)
    rows_box, cols_box = status_box_slices(width)
    frame_index = 0
    frame = first
    try:
        while True:
            row = metrics.get(frame_index)
            points = pose_points.get(frame_index, {})
            _draw_skeleton(frame, points, row, config)
            cv2.putText(
                frame,
                _angle_text(row),
                (8, 22),
                cv2.FONT_HERSHEY_SIMPLEX,
                0.55,
                (255, 255, 255),
                1,
                cv2.LINE_AA,
            )
            output = np.hstack([frame, panel.advance(metrics, frame_index, config)])
            alerted = bool(row and (row["alert_left"] or row["alert_right"]))
            output[rows_box, cols_box] = config.unsafe_color if alerted else config.safe_color
            writer.write(output)
            frame_index += 1
            ok, frame = cap.read()
            if not ok:
                break
    finally:
        writer.release()
        cap.release()
    unmatched = sorted(i for i in metrics if i >= frame_index)
    if unmatched:
        raise AlignmentError(
            f"metrics row for frame {unmatched[0]} has no matching video frame "
            f"(video has {frame_index} frames)"
        )
    return out_path
