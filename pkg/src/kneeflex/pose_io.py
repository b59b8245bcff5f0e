"""CSV ingestion and emission for the two on-disk schemas.

Pose CSV (one row per video frame, header-keyed so column order is free):
    frame,timestamp_s,<slot>_x,<slot>_y,<slot>_z,<slot>_vis ...
    for each slot in l_hip, r_hip, l_knee, r_knee, l_ankle, r_ankle,
    l_foot_index, r_foot_index.

Metrics CSV (one row per analyzed frame):
    frame,timestamp_s,left_knee_angle_deg,right_knee_angle_deg,
    sag_alert_l,sag_alert_r,front_alert_l,front_alert_r

Both are comma-separated UTF-8 with LF line endings and '.' decimals.
Reads are tolerant: empty cells and literal NaN both mean "missing".
Writes are canonical: missing values become empty cells, floats are
written with repr so a round trip reproduces them bit-exactly.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .errors import SchemaError
from .model import LANDMARK_SLOTS, KneeMetricsRow, Landmark, LandmarkFrame, PoseSeries
from .validation import check_positive

POSE_COLUMNS = ("frame", "timestamp_s") + tuple(
    f"{slot}_{axis}" for slot in LANDMARK_SLOTS for axis in ("x", "y", "z", "vis")
)

METRICS_COLUMNS = (
    "frame",
    "timestamp_s",
    "left_knee_angle_deg",
    "right_knee_angle_deg",
    "sag_alert_l",
    "sag_alert_r",
    "front_alert_l",
    "front_alert_r",
)


def _cell(value) -> str:
    return "" if value is None else repr(float(value))


def _parse_float(cell: str | None) -> float | None:
    """Missing, empty, non-numeric and non-finite cells all read as None."""
    if cell is None:
        return None
    cell = cell.strip()
    if not cell:
        return None
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def _check_header(header: list[str] | None, required: tuple[str, ...], path) -> None:
    if header is None:
        raise SchemaError(f"{path}: empty file, expected a header row")
    present = set(header)
    for column in required:
        if column not in present:
            raise SchemaError(f"{path}: malformed header, missing column '{column}'")


def parse_pose_csv(path, fps: float = 30.0, source_id: str | None = None) -> PoseSeries:
    """Read a pose CSV into a PoseSeries of one frame per data row.

    Landmarks with any missing/empty/non-numeric coordinate cell are
    marked missing; the row itself is kept. Timestamps are derived from
    the frame index and fps so they always measure real elapsed time.
    """
    path = Path(path)
    fps = check_positive("fps", fps)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames, POSE_COLUMNS, path)
        frames = []
        for line_no, row in enumerate(reader, start=2):
            frame_cell = (row.get("frame") or "").strip()
            try:
                frame_index = int(float(frame_cell))
            except ValueError:
                raise SchemaError(f"{path}:{line_no}: non-integer frame index {frame_cell!r}")
            if frame_index < 0:
                raise SchemaError(f"{path}:{line_no}: negative frame index {frame_index}")
            landmarks: dict[str, Landmark | None] = {}
            for slot in LANDMARK_SLOTS:
                x = _parse_float(row.get(f"{slot}_x"))
                y = _parse_float(row.get(f"{slot}_y"))
                z = _parse_float(row.get(f"{slot}_z"))
                vis = _parse_float(row.get(f"{slot}_vis"))
                if x is None or y is None or z is None or vis is None:
                    landmarks[slot] = None
                else:
                    landmarks[slot] = Landmark(x, y, z, min(max(vis, 0.0), 1.0))
            frames.append(LandmarkFrame(frame_index, frame_index / fps, landmarks))
    try:
        return PoseSeries(fps=fps, frames=tuple(frames), source_id=source_id or path.stem)
    except ValueError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def write_pose_csv(series: PoseSeries, path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(POSE_COLUMNS)
        for frame in series.frames:
            cells = [str(frame.frame_index), _cell(float(frame.timestamp_s))]
            for slot in LANDMARK_SLOTS:
                lm = frame.landmarks[slot]
                if lm is None:
                    cells += ["", "", "", ""]
                else:
                    cells += [_cell(lm.x), _cell(lm.y), _cell(lm.z), _cell(lm.visibility)]
            writer.writerow(cells)


def write_metrics_csv(rows: list[KneeMetricsRow], path) -> None:
    """Write metrics rows; requires rows already ordered by frame_index."""
    indices = [r.frame_index for r in rows]
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError("rows must be ordered by strictly increasing frame_index")
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(METRICS_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    str(row.frame_index),
                    _cell(float(row.timestamp_s)),
                    _cell(row.left_knee_angle_deg),
                    _cell(row.right_knee_angle_deg),
                    str(row.sagittal_alert_left),
                    str(row.sagittal_alert_right),
                    str(row.frontal_alert_left),
                    str(row.frontal_alert_right),
                ]
            )


def _parse_flag(cell: str | None) -> int:
    value = _parse_float(cell)
    return 1 if value == 1 else 0


def read_metrics_csv(path) -> list[KneeMetricsRow]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _check_header(reader.fieldnames, METRICS_COLUMNS, path)
        rows = []
        for line_no, row in enumerate(reader, start=2):
            try:
                frame_index = int(float(row["frame"]))
            except ValueError:
                raise SchemaError(f"{path}:{line_no}: non-integer frame index {row['frame']!r}")
            timestamp = _parse_float(row.get("timestamp_s"))
            rows.append(
                KneeMetricsRow(
                    frame_index=frame_index,
                    timestamp_s=timestamp if timestamp is not None else 0.0,
                    left_knee_angle_deg=_parse_float(row.get("left_knee_angle_deg")),
                    right_knee_angle_deg=_parse_float(row.get("right_knee_angle_deg")),
                    sagittal_alert_left=_parse_flag(row.get("sag_alert_l")),
                    sagittal_alert_right=_parse_flag(row.get("sag_alert_r")),
                    frontal_alert_left=_parse_flag(row.get("front_alert_l")),
                    frontal_alert_right=_parse_flag(row.get("front_alert_r")),
                )
            )
    return rows
