"""NaN-row preprocessing: drop frames with missing or low-confidence landmarks."""

from __future__ import annotations

from .errors import EmptySeriesError
from .model import PoseSeries
from .validation import check_pose_series, check_unit_interval

DEFAULT_VISIBILITY_MIN = 0.5


def drop_nan_rows(series: PoseSeries, visibility_min: float = DEFAULT_VISIBILITY_MIN) -> PoseSeries:
    """Remove frames where any landmark is missing or below the visibility cut.

    Surviving frames keep their original frame_index, so frame distances
    downstream (notably the minimum spacing between counted repetitions)
    keep measuring real elapsed time rather than post-filter sample count.
    Idempotent: the output passes through unchanged on a second call.
    """
    check_pose_series(series)
    visibility_min = check_unit_interval("visibility_min", visibility_min)
    kept = tuple(
        frame
        for frame in series.frames
        if frame.complete
        and all(lm.visibility >= visibility_min for lm in frame.landmarks.values())
    )
    if not kept:
        raise EmptySeriesError(
            f"no frames of {series.source_id or 'series'} survive NaN/visibility filtering "
            f"(visibility_min={visibility_min})"
        )
    if len(kept) == len(series.frames):
        return series
    return PoseSeries(fps=series.fps, frames=kept, source_id=series.source_id)
