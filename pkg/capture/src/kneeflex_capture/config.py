"""Capture configuration and the pose CSV schema this package speaks.

The schema constants mirror the analysis package's documented CSV
interface; they are duplicated here on purpose so this package couples
to the file format, not to the analysis library.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

LANDMARK_SLOTS = (
    "l_hip",
    "r_hip",
    "l_knee",
    "r_knee",
    "l_ankle",
    "r_ankle",
    "l_foot_index",
    "r_foot_index",
)

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


@dataclass(frozen=True)
class CaptureConfig:
    """Inputs and outputs of one capture run.

    ``output_csv_path`` receives the extracted pose CSV and is also
    where the replay renderer finds the landmark geometry for the
    stick-figure overlay. Colors are BGR to match the video stack.
    """

    video_path: Path
    output_csv_path: Path
    model_complexity: int = 1
    overlay_path: Path | None = None
    safe_color: tuple[int, int, int] = (60, 170, 60)
    unsafe_color: tuple[int, int, int] = (40, 40, 230)

    def __post_init__(self):
        object.__setattr__(self, "video_path", Path(self.video_path))
        object.__setattr__(self, "output_csv_path", Path(self.output_csv_path))
        if self.overlay_path is not None:
            object.__setattr__(self, "overlay_path", Path(self.overlay_path))
        if self.model_complexity not in (0, 1, 2):
            raise ValueError(f"model_complexity must be 0, 1 or 2, got {self.model_complexity}")


class AlignmentError(RuntimeError):
    """Metrics rows do not line up with the video's frame indices."""
