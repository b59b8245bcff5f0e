"""Video-side companion for kneeflex.

Extracts the eight leg landmarks per frame into the pose CSV schema and
renders the augmented replay (stick-figure overlay, live angle plot,
alert coloring). Consumes the analysis package only through its CSV
schemas and CLI, so all angle/alert/count math lives in one place.
"""

from .analysis import run_primary_analysis
from .config import AlignmentError, CaptureConfig, LANDMARK_SLOTS, POSE_COLUMNS
from .engines import (
    EngineUnavailableError,
    MediaPipeEngine,
    PoseEngine,
    ScriptedEngine,
    scripted_from_pose_csv,
)
from .extract import extract_landmarks, open_video
from .replay import render_augmented_replay, status_box_slices

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "CaptureConfig",
    "EngineUnavailableError",
    "LANDMARK_SLOTS",
    "MediaPipeEngine",
    "POSE_COLUMNS",
    "PoseEngine",
    "ScriptedEngine",
    "extract_landmarks",
    "open_video",
    "render_augmented_replay",
    "run_primary_analysis",
    "scripted_from_pose_csv",
    "status_box_slices",
]
