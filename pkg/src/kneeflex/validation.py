"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numpy as np

from .errors import InsufficientDataError
from .model import PoseSeries


def check_positive(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value


def check_non_negative(name: str, value) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be a non-negative finite number, got {value}")
    return value


def check_unit_interval(name: str, value) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return value


def check_pose_series(series) -> PoseSeries:
    if not isinstance(series, PoseSeries):
        raise TypeError(f"expected a PoseSeries, got {type(series).__name__}")
    return series


def as_frame_angle_arrays(X) -> tuple[np.ndarray, np.ndarray]:
    """Coerce counting input into (frame_index, angle_deg) arrays.

    Accepts an iterable of (frame_index, angle) pairs, a 2-column array,
    or a plain 1-D sequence of angles (frames then default to 0..n-1).
    Requires at least two finite samples and strictly increasing frames.
    """
    arr = np.asarray(list(X) if not isinstance(X, np.ndarray) else X, dtype=float)
    if arr.ndim == 1:
        frames = np.arange(arr.shape[0])
        angles = arr
    elif arr.ndim == 2 and arr.shape[1] == 2:
        frames = arr[:, 0]
        angles = arr[:, 1]
        if not np.all(np.isfinite(frames)) or np.any(frames != np.round(frames)):
            raise ValueError("frame indices must be finite integers")
        frames = frames.astype(int)
    else:
        raise ValueError(f"expected 1-D angles or (n, 2) frame/angle pairs, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {arr.shape[0]}")
    if not np.all(np.isfinite(angles)):
        raise ValueError("angle values must be finite (drop NaN rows first)")
    if np.any(np.diff(frames) <= 0):
        raise ValueError("frame indices must be strictly increasing")
    return np.asarray(frames, dtype=int), np.asarray(angles, dtype=float)
