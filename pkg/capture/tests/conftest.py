"""Fixture helpers: synthetic videos and scripted detections."""

import subprocess
import sys
from pathlib import Path

import cv2
import numpy as np
import pytest


def make_test_video(path, n_frames=60, size=(320, 240), fps=30.0):
    """Write a small mp4 of a moving blob; returns the path."""
    path = Path(path)
    width, height = size
    writer = cv2.VideoWriter(
        str(path), cv2.VideoWriter_fourcc(*"mp4v"), fps, (width, height)
    )
    assert writer.isOpened()
    for i in range(n_frames):
        frame = np.full((height, width, 3), 16, dtype=np.uint8)
        cx = int((0.2 + 0.6 * (i / max(n_frames - 1, 1))) * width)
        cv2.circle(frame, (cx, height // 2), 20, (180, 120, 60), -1)
        writer.write(frame)
    writer.release()
    return path


def count_frames(path):
    cap = cv2.VideoCapture(str(path))
    n = 0
    while True:
        ok, _ = cap.read()
        if not ok:
            break
        n += 1
    cap.release()
    return n


def simple_detection(knee_forward=0.0):
    """One plausible standing detection, optionally with the knee shifted."""
    base = {
        "l_hip": (0.51, 0.30, 0.0, 1.0),
        "r_hip": (0.49, 0.30, 0.0, 1.0),
        "l_knee": (0.51 + knee_forward, 0.60, 0.0, 1.0),
        "r_knee": (0.49 + knee_forward, 0.60, 0.0, 1.0),
        "l_ankle": (0.51, 0.90, 0.0, 1.0),
        "r_ankle": (0.49, 0.90, 0.0, 1.0),
        "l_foot_index": (0.58, 0.92, 0.0, 1.0),
        "r_foot_index": (0.56, 0.92, 0.0, 1.0),
    }
    return base


def run_kneeflex(*args):
    """Invoke the analysis CLI as a subprocess (the external interface)."""
    return subprocess.run(
        [sys.executable, "-m", "kneeflex.cli", *args], capture_output=True, text=True
    )


@pytest.fixture
def synth_fixture(tmp_path):
    """Pose CSV + ground-truth sidecar for a 5-rep session with faults."""
    result = run_kneeflex(
        "synth",
        "--reps", "5",
        "--seed", "3",
        "--kind", "pose",
        "--name", "clip",
        "--out-dir", str(tmp_path),
        "--fault-window", "3.2:3.8",
        "--fault-side", "both",
    )
    assert result.returncode == 0, result.stderr
    return tmp_path / "clip_pose.csv", tmp_path / "clip_truth.json"
