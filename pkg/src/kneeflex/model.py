"""Domain types for pose-landmark timeseries and derived knee metrics.

All types are immutable values; operations elsewhere in the package are
pure functions over them, so everything here is safe to share across
threads or processes.

A pose frame carries exactly eight landmark slots: left/right hip, knee,
ankle and foot index (the toe-tip landmark of the pose engine). A slot
may be ``None`` when the pose engine did not detect that landmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class KneeSide(Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def prefix(self) -> str:
        """Column prefix used by the CSV schemas ('l' or 'r')."""
        return self.value[0]


class ViewPlane(Enum):
    SAGITTAL = "sagittal"
    FRONTAL = "frontal"


JOINTS = ("hip", "knee", "ankle", "foot_index")

#: Canonical slot order shared by the CSV schema and all per-frame loops.
LANDMARK_SLOTS = tuple(
    f"{side.prefix}_{joint}" for joint in JOINTS for side in (KneeSide.LEFT, KneeSide.RIGHT)
)


def slot_name(side: KneeSide, joint: str) -> str:
    if joint not in JOINTS:
        raise ValueError(f"unknown joint {joint!r}, expected one of {JOINTS}")
    return f"{side.prefix}_{joint}"


@dataclass(frozen=True)
class Landmark:
    """One detected body landmark in normalized image coordinates.

    x grows left to right, y top to bottom, both in [0, 1] for points
    inside the image. z is the pose engine's hip-relative depth (smaller
    is closer to the camera). visibility is the engine's detection
    confidence in [0, 1].
    """

    x: float
    y: float
    z: float = 0.0
    visibility: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError(f"visibility must be in [0, 1], got {self.visibility}")

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)


@dataclass(frozen=True)
class LandmarkFrame:
    """Landmarks of a single video frame.

    ``landmarks`` maps every name in LANDMARK_SLOTS to a Landmark or to
    ``None`` for slots the pose engine missed. ``frame_index`` is the
    original video frame number and is preserved through filtering so
    that frame distances keep measuring real elapsed time.
    """

    frame_index: int
    timestamp_s: float
    landmarks: dict[str, Landmark | None] = field(default_factory=dict)

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValueError(f"frame_index must be >= 0, got {self.frame_index}")
        missing = [s for s in LANDMARK_SLOTS if s not in self.landmarks]
        if missing:
            raise ValueError(f"frame {self.frame_index} lacks landmark slots: {missing}")
        extra = [s for s in self.landmarks if s not in LANDMARK_SLOTS]
        if extra:
            raise ValueError(f"frame {self.frame_index} has unknown landmark slots: {extra}")

    def get(self, side: KneeSide, joint: str) -> Landmark | None:
        return self.landmarks[slot_name(side, joint)]

    @property
    def complete(self) -> bool:
        """True when all eight slots hold a finite landmark."""
        return all(lm is not None and lm.is_finite for lm in self.landmarks.values())


@dataclass(frozen=True)
class PoseSeries:
    """An ordered pose-landmark timeseries, the unit of ingestion."""

    fps: float
    frames: tuple[LandmarkFrame, ...]
    source_id: str = ""

    def __post_init__(self):
        if not self.fps > 0:
            raise ValueError(f"fps must be positive, got {self.fps}")
        object.__setattr__(self, "frames", tuple(self.frames))
        indices = [f.frame_index for f in self.frames]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("frame_index must be strictly increasing")

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def duration_s(self) -> float:
        """Elapsed time covered by the series, from the original frame indices."""
        if not self.frames:
            return 0.0
        return (self.frames[-1].frame_index + 1) / self.fps


@dataclass(frozen=True)
class KneeMetricsRow:
    """Per-frame knee angles and safety flags, one row of the metrics CSV.

    Angles are interior thigh-calf angles in degrees (standing straight is
    about 180, a deep squat about 90) and are ``None`` when they could not
    be computed for that frame. Alert flags are 0/1; flags of the view
    that was not analyzed stay 0.
    """

    frame_index: int
    timestamp_s: float
    left_knee_angle_deg: float | None
    right_knee_angle_deg: float | None
    sagittal_alert_left: int = 0
    sagittal_alert_right: int = 0
    frontal_alert_left: int = 0
    frontal_alert_right: int = 0

    def __post_init__(self):
        for name in ("left_knee_angle_deg", "right_knee_angle_deg"):
            value = getattr(self, name)
            if value is not None and not math.isfinite(value):
                raise ValueError(f"{name} must be finite or None, got {value}")
        for name in (
            "sagittal_alert_left",
            "sagittal_alert_right",
            "frontal_alert_left",
            "frontal_alert_right",
        ):
            if getattr(self, name) not in (0, 1):
                raise ValueError(f"{name} must be 0 or 1")

    def angle(self, side: KneeSide) -> float | None:
        return self.left_knee_angle_deg if side is KneeSide.LEFT else self.right_knee_angle_deg
