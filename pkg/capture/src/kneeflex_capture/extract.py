"""Frame-by-frame landmark extraction from a video into the pose CSV schema."""

from __future__ import annotations

import csv
from pathlib import Path

import cv2

from .config import LANDMARK_SLOTS, POSE_COLUMNS, CaptureConfig
from .engines import MediaPipeEngine, PoseEngine


def open_video(path) -> tuple[cv2.VideoCapture, float, int]:
    """Open a video for reading; returns (capture, fps, frame_count_hint)."""
    path = Path(path)
    if not path.is_file():
        raise IOError(f"video not found: {path}")
    cap = cv2.VideoCapture(str(path))
    if not cap.isOpened():
        raise IOError(f"cannot decode video: {path}")
    fps = cap.get(cv2.CAP_PROP_FPS) or 30.0
    count_hint = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
    return cap, float(fps), count_hint


def extract_landmarks(config: CaptureConfig, engine: PoseEngine | None = None) -> Path:
    """Run the pose engine over every frame and write the pose CSV.

    One row per video frame, in frame order. Frames where the engine
    finds no person, and slots it does not report, become empty cells;
    downstream NaN filtering decides what to keep. Returns the CSV path.
    """
    engine = engine or MediaPipeEngine(config.model_complexity)
    cap, fps, _ = open_video(config.video_path)
    out_path = Path(config.output_csv_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with out_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(POSE_COLUMNS)
            frame_index = 0
            while True:
                ok, frame = cap.read()
                if not ok:
                    break
                detection = engine.detect(frame)
                cells = [str(frame_index), repr(frame_index / fps)]
                for slot in LANDMARK_SLOTS:
                    values = (detection or {}).get(slot)
                    if values is None:
                        cells += ["", "", "", ""]
                    else:
                        x, y, z, vis = values
                        cells += [repr(float(x)), repr(float(y)), repr(float(z)),
                                  repr(float(min(max(vis, 0.0), 1.0)))]
                writer.writerow(cells)
                frame_index += 1
    finally:
        cap.release()
        engine.close()
    return out_path
