"""Session-level operations: analyze, evaluate, trim-command emission, reports.

A session report is the durable JSON summary of one analyzed recording:
the parameters used, the repetition index, and alert statistics. Reports
are written with a fixed field order so identical inputs produce
byte-identical files except for the creation timestamp. Everything here
is strictly local file I/O; nothing is ever uploaded anywhere.
"""

from __future__ import annotations

import csv
import json
import shlex
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .counter import CounterParams, center_series, count_and_index
from .errors import SchemaError
from .kinematics import AngleParams, compute_metrics
from .model import KneeMetricsRow, KneeSide, ViewPlane
from .plotting import render_plot
from .pose_io import parse_pose_csv, write_metrics_csv
from .preprocess import DEFAULT_VISIBILITY_MIN, drop_nan_rows

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class LabelEntry:
    """One row of a labels file: ground-truth repetition total for a recording."""

    source_id: str
    camera_view: ViewPlane
    exercise_total: int

    def __post_init__(self):
        object.__setattr__(self, "camera_view", ViewPlane(self.camera_view))
        if self.exercise_total < 1:
            raise ValueError(f"exercise_total must be >= 1, got {self.exercise_total}")


LABELS_COLUMNS = ("source_id", "camera_view", "exercise_total")


def read_labels_csv(path) -> list[LabelEntry]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty labels file")
        for column in LABELS_COLUMNS:
            if column not in reader.fieldnames:
                raise SchemaError(f"{path}: malformed header, missing column '{column}'")
        entries = []
        for line_no, row in enumerate(reader, start=2):
            try:
                entries.append(
                    LabelEntry(
                        source_id=row["source_id"].strip(),
                        camera_view=ViewPlane(row["camera_view"].strip().lower()),
                        exercise_total=int(row["exercise_total"]),
                    )
                )
            except (ValueError, KeyError) as exc:
                raise SchemaError(f"{path}:{line_no}: bad label row: {exc}") from exc
    return entries


def counting_accuracy(detected: int, actual: int) -> float:
    """Agreement between a detected and a labeled count, in percent.

    min/max of the two counts, so over- and under-counting are
    penalized symmetrically: 11 detected of 12 gives 91.67, and so does
    12 of 11.
    """
    if actual < 1:
        raise ValueError(f"actual count must be >= 1, got {actual}")
    if detected < 0:
        raise ValueError(f"detected count must be >= 0, got {detected}")
    if detected == 0:
        return 0.0
    return 100.0 * min(detected, actual) / max(detected, actual)


@dataclass(frozen=True)
class SessionReport:
    """Aggregate summary of one analyzed session."""

    source_id: str
    view: ViewPlane
    side: KneeSide
    params: dict
    count: int
    reps: tuple[dict, ...]
    series: dict
    alerts: dict
    created_at: str
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "view", ViewPlane(self.view))
        object.__setattr__(self, "side", KneeSide(self.side))
        object.__setattr__(self, "reps", tuple(self.reps))
        if self.count != len(self.reps):
            raise ValueError(f"count {self.count} != number of rep entries {len(self.reps)}")

    def to_dict(self) -> dict:
        # Field order is part of the byte-stability contract.
        return {
            "schema_version": self.schema_version,
            "source_id": self.source_id,
            "created_at": self.created_at,
            "view": self.view.value,
            "side": self.side.value,
            "params": self.params,
            "count": self.count,
            "reps": list(self.reps),
            "series": self.series,
            "alerts": self.alerts,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionReport":
        validate_report_dict(data)
        return cls(
            source_id=data["source_id"],
            view=ViewPlane(data["view"]),
            side=KneeSide(data["side"]),
            params=data["params"],
            count=data["count"],
            reps=tuple(data["reps"]),
            series=data["series"],
            alerts=data["alerts"],
            created_at=data["created_at"],
            schema_version=data["schema_version"],
        )


REPORT_REQUIRED_KEYS = (
    "schema_version",
    "source_id",
    "created_at",
    "view",
    "side",
    "params",
    "count",
    "reps",
    "series",
    "alerts",
)


def validate_report_dict(data: dict) -> None:
    for key in REPORT_REQUIRED_KEYS:
        if key not in data:
            raise SchemaError(f"report is missing required field '{key}'")
    if data["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported report schema_version {data['schema_version']}")
    if data["count"] != len(data["reps"]):
        raise SchemaError("report count does not match its rep entries")
    for rep in data["reps"]:
        for key in ("frame_index", "timestamp_s", "peak_depth_deg"):
            if key not in rep:
                raise SchemaError(f"rep entry is missing '{key}'")


def write_report(report: SessionReport, path) -> None:
    Path(path).write_text(
        json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
    )


def read_report(path) -> SessionReport:
    return SessionReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def append_session_index(index_path, report: SessionReport, report_path) -> None:
    """Append one line to the session index (exclusive-writer contract).

    The whole line is written in a single call so concurrent readers
    only ever see complete lines.
    """
    index_path = Path(index_path)
    line = ",".join(
        [report.source_id, report.created_at, str(report.count), str(report_path)]
    )
    header = "source_id,created_at,count,report_path\n"
    with index_path.open("a", encoding="utf-8") as fh:
        if fh.tell() == 0:
            fh.write(header + line + "\n")
        else:
            fh.write(line + "\n")


def _alert_summary(rows: list[KneeMetricsRow], view: ViewPlane) -> dict:
    sagittal = sum(1 for r in rows if r.sagittal_alert_left or r.sagittal_alert_right)
    frontal = sum(1 for r in rows if r.frontal_alert_left or r.frontal_alert_right)
    flagged = sagittal if view is ViewPlane.SAGITTAL else frontal
    return {
        "frames_flagged_sagittal": sagittal,
        "frames_flagged_frontal": frontal,
        "flagged_fraction": flagged / len(rows) if rows else 0.0,
    }


def analyze(
    input_csv,
    out_dir,
    view: ViewPlane = ViewPlane.SAGITTAL,
    side: KneeSide = KneeSide.RIGHT,
    fps: float = 30.0,
    visibility_min: float = DEFAULT_VISIBILITY_MIN,
    std_threshold: float = 0.5,
    min_exercise_seconds: float = 4.0,
    sagittal_margin: float = 0.0,
    frontal_epsilon: float = 0.0,
    plot_path=None,
) -> tuple[SessionReport, dict]:
    """Run the full pipeline on one pose CSV and persist all outputs.

    parse -> drop NaN rows -> per-frame metrics -> metrics CSV ->
    counting/indexing -> plot -> report JSON -> session index. Returns
    the report and a dict of written paths.
    """
    view = ViewPlane(view)
    side = KneeSide(side)
    input_csv = Path(input_csv)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    series = parse_pose_csv(input_csv, fps=fps)
    cleaned = drop_nan_rows(series, visibility_min=visibility_min)
    angle_params = AngleParams(
        view=view,
        side=side,
        sagittal_margin=sagittal_margin,
        frontal_epsilon=frontal_epsilon,
    )
    rows = compute_metrics(cleaned, angle_params)

    stem = input_csv.stem
    metrics_path = out_dir / f"{stem}_metrics.csv"
    write_metrics_csv(rows, metrics_path)

    counter_params = CounterParams(
        std_threshold=std_threshold, min_exercise_seconds=min_exercise_seconds, fps=fps
    )
    column = f"{side.value}_knee_angle_deg"
    index = count_and_index(metrics_path, selected_column=column, params=counter_params)

    centered = center_series(
        [(r.frame_index, getattr(r, column)) for r in rows if getattr(r, column) is not None]
    )
    plot_path = Path(plot_path) if plot_path else out_dir / f"{stem}_plot.svg"
    render_plot(centered, index, plot_path, params=counter_params)

    report = SessionReport(
        source_id=series.source_id,
        view=view,
        side=side,
        params={
            "visibility_min": visibility_min,
            "angle": {
                "sagittal_margin": sagittal_margin,
                "frontal_epsilon": frontal_epsilon,
                "collinear_tol": angle_params.collinear_tol,
            },
            "counter": {
                "std_threshold": std_threshold,
                "min_exercise_seconds": min_exercise_seconds,
                "fps": fps,
            },
        },
        count=index.count,
        reps=tuple(
            {
                "frame_index": r.frame_index,
                "timestamp_s": r.timestamp_s,
                "peak_depth_deg": r.peak_depth_deg,
            }
            for r in index.reps
        ),
        series={
            "n_frames_input": len(series),
            "n_frames_used": len(cleaned),
            "duration_s": cleaned.duration_s,
            "mean_angle_deg": centered.mean_removed,
            "std_angle_deg": centered.std,
        },
        alerts=_alert_summary(rows, view),
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    report_path = out_dir / f"{stem}_report.json"
    write_report(report, report_path)
    append_session_index(out_dir / "index.csv", report, report_path)
    paths = {
        "metrics": metrics_path,
        "plot": plot_path,
        "report": report_path,
        "index": out_dir / "index.csv",
    }
    return report, paths


def _resolve_metrics_csv(metrics_dir: Path, source_id: str) -> Path | None:
    stem = Path(source_id).stem
    for candidate in (source_id, f"{stem}.csv", f"{stem}_metrics.csv"):
        path = metrics_dir / candidate
        if path.is_file():
            return path
    return None


def evaluate(
    labels_path,
    metrics_dir,
    params: CounterParams | None = None,
    selected_column: str = "right_knee_angle_deg",
) -> dict:
    """Score detected counts against a labels file, per file and overall.

    Per-file accuracy is min/max of detected vs labeled count; the
    overall block reports the per-file range plus the total-weighted
    accuracy (summed min over summed max). Labels whose metrics CSV
    cannot be resolved are listed under "missing" and excluded from the
    overall figures.
    """
    params = params or CounterParams()
    metrics_dir = Path(metrics_dir)
    files = []
    missing = []
    for label in read_labels_csv(labels_path):
        path = _resolve_metrics_csv(metrics_dir, label.source_id)
        if path is None:
            missing.append(label.source_id)
            continue
        detected = count_and_index(path, selected_column=selected_column, params=params).count
        files.append(
            {
                "source_id": label.source_id,
                "camera_view": label.camera_view.value,
                "actual": label.exercise_total,
                "detected": detected,
                "accuracy_pct": counting_accuracy(detected, label.exercise_total),
                "metrics_path": str(path),
            }
        )
    overall = {}
    if files:
        accuracies = [f["accuracy_pct"] for f in files]
        total_min = sum(min(f["detected"], f["actual"]) for f in files)
        total_max = sum(max(f["detected"], f["actual"]) for f in files)
        overall = {
            "files": len(files),
            "min_accuracy_pct": min(accuracies),
            "max_accuracy_pct": max(accuracies),
            "weighted_accuracy_pct": 100.0 * total_min / total_max,
            "total_actual": sum(f["actual"] for f in files),
            "total_detected": sum(f["detected"] for f in files),
        }
    return {"files": files, "missing": missing, "overall": overall}


def emit_trim_commands(
    report: SessionReport,
    video_path,
    margin_s: float = 2.0,
    fps: float | None = None,
) -> list[str]:
    """One stream-copy transcoder command per detected repetition.

    Each clip starts margin_s before the trough (clamped to 0) and
    lasts 2 * margin_s. Pass ``fps`` to re-derive trough times from
    frame indices, e.g. when the target video was re-timed; otherwise
    the report's timestamps are used. Commands are returned as strings
    and never executed. A report with zero repetitions yields an empty
    list.
    """
    if margin_s <= 0:
        raise ValueError(f"margin_s must be positive, got {margin_s}")
    stem = Path(report.source_id).stem
    commands = []
    for k, rep in enumerate(report.reps, start=1):
        trough_s = rep["frame_index"] / fps if fps else float(rep["timestamp_s"])
        start = max(0.0, trough_s - margin_s)
        duration = 2.0 * margin_s
        out_name = f"{stem}_rep{k}.mp4"
        commands.append(
            shlex.join(
                [
                    "ffmpeg",
                    "-y",
                    "-ss",
                    f"{start:.3f}",
                    "-i",
                    str(video_path),
                    "-t",
                    f"{duration:.3f}",
                    "-c",
                    "copy",
                    out_name,
                ]
            )
        )
    return commands
