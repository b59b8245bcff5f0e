"""Adaptive repetition counting and indexing on a knee-angle timeseries.

The counting pipeline is: subtract the series mean, derive a depth
threshold from the population standard deviation, then pick negative
peaks (local minima of the centered signal) that clear the threshold
and are far enough apart in time. Because both the threshold and the
peak depths scale together, counting is invariant under any affine
re-scaling of the input angles; the only tunables are the threshold
multiplier and the minimum spacing between repetitions.

Spacing is measured on the original video frame indices, which survive
NaN-row filtering, so "minimum exercise time" stays a temporal notion
even when frames were dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySeriesError, SchemaError
from .pose_io import read_metrics_csv
from .validation import as_frame_angle_arrays, check_positive

DEFAULT_STD_THRESHOLD = 0.5
DEFAULT_MIN_EXERCISE_SECONDS = 4.0


@dataclass(frozen=True)
class CounterParams:
    """Tunables of the repetition counter.

    ``std_threshold`` scales the standard deviation into the minimum
    peak depth (trades false positives against false negatives);
    ``min_exercise_seconds`` is the shortest plausible repetition and
    filters random movements; ``fps`` converts it into frames.
    """

    std_threshold: float = DEFAULT_STD_THRESHOLD
    min_exercise_seconds: float = DEFAULT_MIN_EXERCISE_SECONDS
    fps: float = 30.0

    def __post_init__(self):
        check_positive("std_threshold", self.std_threshold)
        check_positive("min_exercise_seconds", self.min_exercise_seconds)
        check_positive("fps", self.fps)

    @property
    def min_distance_frames(self) -> int:
        return max(1, int(round(self.min_exercise_seconds * self.fps)))


@dataclass(frozen=True)
class CenteredSeries:
    """A mean-removed angle series with its centering statistics."""

    frame_index: np.ndarray
    values: np.ndarray
    mean_removed: float
    std: float

    def __post_init__(self):
        object.__setattr__(self, "frame_index", np.asarray(self.frame_index, dtype=int))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.frame_index.shape != self.values.shape:
            raise ValueError("frame_index and values must have equal length")
        scale = float(np.max(np.abs(self.values))) + 1.0 if self.values.size else 1.0
        if self.values.size and abs(float(np.mean(self.values))) > 1e-9 * scale:
            raise ValueError("centered values must have (numerically) zero mean")

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class RepPeak:
    """One detected repetition: where it bottomed out and how deep."""

    frame_index: int
    timestamp_s: float
    peak_depth_deg: float  # centered angle at the trough, negative


@dataclass(frozen=True)
class ExerciseIndex:
    """Detected repetition count plus the per-repetition locations."""

    count: int
    reps: tuple[RepPeak, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "reps", tuple(self.reps))
        if self.count != len(self.reps):
            raise ValueError(f"count {self.count} != number of reps {len(self.reps)}")
        frames = [r.frame_index for r in self.reps]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise ValueError("reps must be sorted by strictly increasing frame_index")

    @property
    def frames(self) -> list[int]:
        return [r.frame_index for r in self.reps]


def center_series(angles) -> CenteredSeries:
    """Subtract the arithmetic mean and record mean and population std.

    ``angles`` is an iterable of (frame_index, angle_deg) pairs, a
    two-column array, or a plain angle sequence. Needs at least two
    finite samples.
    """
    frames, values = as_frame_angle_arrays(angles)
    mean = float(np.mean(values))
    centered = values - mean
    std = float(np.std(centered))
    return CenteredSeries(frame_index=frames, values=centered, mean_removed=mean, std=std)


def _local_minima(values: np.ndarray) -> list[int]:
    """Indices of strict local minima; a plateau yields its middle sample.

    Endpoints are never minima: a minimum needs a higher neighbor on
    both sides, which also keeps walk-in/walk-out artifacts from
    counting.
    """
    n = values.size
    minima = []
    i = 1
    while i < n - 1:
        if values[i] < values[i - 1]:
            j = i
            while j + 1 < n and values[j + 1] == values[i]:
                j += 1
            if j + 1 < n and values[j + 1] > values[i]:
                minima.append((i + j) // 2)  # left of the two middles for even plateaus
            i = j + 1
        else:
            i += 1
    return minima


def find_negative_peaks(series: CenteredSeries, params: CounterParams) -> ExerciseIndex:
    """Pick repetition troughs from a centered series.

    A candidate is a local minimum deeper than std * std_threshold.
    Candidates are then accepted greedily, deepest first (ties broken
    toward the lower frame index), each kept only when at least
    ``min_distance_frames`` original frames away from every already
    kept peak. The result is re-sorted by frame index. A zero-variance
    series yields zero peaks.
    """
    if series.std == 0.0:
        return ExerciseIndex(count=0)
    threshold = series.std * params.std_threshold
    candidates = [i for i in _local_minima(series.values) if -series.values[i] > threshold]
    order = sorted(candidates, key=lambda i: (series.values[i], series.frame_index[i]))
    min_gap = params.min_distance_frames
    kept: list[int] = []
    for i in order:
        frame = series.frame_index[i]
        if all(abs(int(frame) - int(series.frame_index[k])) >= min_gap for k in kept):
            kept.append(i)
    kept.sort(key=lambda i: series.frame_index[i])
    reps = tuple(
        RepPeak(
            frame_index=int(series.frame_index[i]),
            timestamp_s=int(series.frame_index[i]) / params.fps,
            peak_depth_deg=float(series.values[i]),
        )
        for i in kept
    )
    return ExerciseIndex(count=len(reps), reps=reps)


ANGLE_COLUMNS = ("left_knee_angle_deg", "right_knee_angle_deg")


def count_and_index(
    metrics_csv_path,
    selected_column: str = "right_knee_angle_deg",
    params: CounterParams | None = None,
) -> ExerciseIndex:
    """Count repetitions from a metrics CSV column, end to end.

    Reads the file, drops rows whose selected angle is missing, centers
    the remaining series and finds the negative peaks. The default
    column is the right knee, the typical injured side.
    """
    if selected_column not in ANGLE_COLUMNS:
        raise SchemaError(
            f"selected column {selected_column!r} is not an angle column, "
            f"expected one of {ANGLE_COLUMNS}"
        )
    params = params or CounterParams()
    rows = read_metrics_csv(metrics_csv_path)
    pairs = [
        (row.frame_index, getattr(row, selected_column))
        for row in rows
        if getattr(row, selected_column) is not None
    ]
    if not pairs:
        raise EmptySeriesError(
            f"{metrics_csv_path}: no usable rows in column {selected_column!r} after NaN removal"
        )
    return find_negative_peaks(center_series(pairs), params)
