"""Pose engines: anything that maps a video frame to the 8 landmark slots.

The production engine is Google's MediaPipe pose model, imported lazily
so the rest of the package works where it is not installed (extraction
then needs an explicitly provided engine). A detection is a dict from
slot name to (x, y, z, visibility) in normalized image coordinates with
the engine's native hip-relative z; None means no person was found in
the frame, and individual slots may be absent.
"""

from __future__ import annotations

from typing import Iterable, Protocol

from .config import LANDMARK_SLOTS

Detection = dict[str, tuple[float, float, float, float]]


class PoseEngine(Protocol):
    def detect(self, frame_bgr) -> Detection | None: ...

    def close(self) -> None: ...


class EngineUnavailableError(RuntimeError):
    pass


# MediaPipe's 33-point topology, indices of the slots this pipeline keeps.
MEDIAPIPE_SLOT_INDICES = {
    "l_hip": 23,
    "r_hip": 24,
    "l_knee": 25,
    "r_knee": 26,
    "l_ankle": 27,
    "r_ankle": 28,
    "l_foot_index": 31,
    "r_foot_index": 32,
}


class MediaPipeEngine:
    """Wraps mediapipe's pose solution; requires the mediapipe extra."""

    def __init__(self, model_complexity: int = 1):
        try:
            import mediapipe as mp
        except ImportError as exc:
            raise EngineUnavailableError(
                "mediapipe is not installed; install the 'mediapipe' extra or "
                "pass an explicit engine"
            ) from exc
        self._pose = mp.solutions.pose.Pose(
            static_image_mode=False, model_complexity=model_complexity
        )
        self._mp = mp

    def detect(self, frame_bgr) -> Detection | None:
        import cv2

        result = self._pose.process(cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2RGB))
        if not result.pose_landmarks:
            return None
        landmarks = result.pose_landmarks.landmark
        detection: Detection = {}
        for slot, index in MEDIAPIPE_SLOT_INDICES.items():
            lm = landmarks[index]
            detection[slot] = (lm.x, lm.y, lm.z, lm.visibility)
        return detection

    def close(self) -> None:
        self._pose.close()


class ScriptedEngine:
    """Replays a prepared per-frame detection sequence; for tests and demos."""

    def __init__(self, detections: Iterable[Detection | None]):
        self._detections = list(detections)
        self._cursor = 0

    def detect(self, frame_bgr) -> Detection | None:
        if self._cursor >= len(self._detections):
            return None
        detection = self._detections[self._cursor]
        self._cursor += 1
        return detection

    def close(self) -> None:
        pass


def scripted_from_pose_csv(path) -> ScriptedEngine:
    """Build a scripted engine from an existing pose CSV fixture."""
    import csv

    detections: list[Detection | None] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            detection: Detection = {}
            for slot in LANDMARK_SLOTS:
                cells = [row.get(f"{slot}_{axis}", "") for axis in ("x", "y", "z", "vis")]
                if all(c.strip() for c in cells):
                    detection[slot] = tuple(float(c) for c in cells)
            detections.append(detection or None)
    return ScriptedEngine(detections)
