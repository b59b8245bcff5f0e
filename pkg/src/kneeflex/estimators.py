"""Estimator-style wrappers so the pipeline composes with scikit-learn.

NanRowFilter and KneeMetricsTransformer are stateless transformers over
PoseSeries objects; RepCounter is a transductive estimator in the
clustering mold: fit() learns the centering statistics and the adaptive
depth threshold from the series itself and stores the resulting
repetition index on the instance. All three expose get_params /
set_params and survive sklearn.base.clone, so they can sit inside a
sklearn Pipeline.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .counter import CenteredSeries, CounterParams, ExerciseIndex, center_series, find_negative_peaks
from .kinematics import AngleParams, compute_metrics
from .model import KneeMetricsRow, PoseSeries, ViewPlane
from .preprocess import DEFAULT_VISIBILITY_MIN, drop_nan_rows


class NanRowFilter(BaseEstimator, TransformerMixin):
    """Drop frames with missing or low-confidence landmarks."""

    def __init__(self, visibility_min: float = DEFAULT_VISIBILITY_MIN):
        self.visibility_min = visibility_min

    def fit(self, X: PoseSeries, y=None):
        return self

    def transform(self, X: PoseSeries) -> PoseSeries:
        return drop_nan_rows(X, visibility_min=self.visibility_min)


class KneeMetricsTransformer(BaseEstimator, TransformerMixin):
    """Turn a PoseSeries into per-frame knee metrics rows."""

    def __init__(
        self,
        view: str | ViewPlane = "sagittal",
        sagittal_margin: float = 0.0,
        frontal_epsilon: float = 0.0,
        collinear_tol: float = 1e-9,
    ):
        self.view = view
        self.sagittal_margin = sagittal_margin
        self.frontal_epsilon = frontal_epsilon
        self.collinear_tol = collinear_tol

    def fit(self, X: PoseSeries, y=None):
        return self

    def transform(self, X: PoseSeries) -> list[KneeMetricsRow]:
        params = AngleParams(
            view=ViewPlane(self.view),
            sagittal_margin=self.sagittal_margin,
            frontal_epsilon=self.frontal_epsilon,
            collinear_tol=self.collinear_tol,
        )
        return compute_metrics(X, params)


class RepCounter(BaseEstimator):
    """Adaptive repetition counter over a knee-angle timeseries.

    fit() accepts (frame_index, angle) pairs, a two-column array or a
    plain angle sequence, learns the mean/std of the series and detects
    the repetitions. Fitted state: ``centered_`` (the mean-removed
    series), ``mean_``, ``std_``, ``threshold_`` (minimum peak depth)
    and ``index_`` (the ExerciseIndex); ``count_`` is a convenience
    alias for ``index_.count``.
    """

    def __init__(
        self,
        std_threshold: float = 0.5,
        min_exercise_seconds: float = 4.0,
        fps: float = 30.0,
    ):
        self.std_threshold = std_threshold
        self.min_exercise_seconds = min_exercise_seconds
        self.fps = fps

    def _params(self) -> CounterParams:
        return CounterParams(
            std_threshold=self.std_threshold,
            min_exercise_seconds=self.min_exercise_seconds,
            fps=self.fps,
        )

    def fit(self, X, y=None):
        params = self._params()
        centered = center_series(X)
        self.centered_: CenteredSeries = centered
        self.mean_: float = centered.mean_removed
        self.std_: float = centered.std
        self.threshold_: float = centered.std * params.std_threshold
        self.index_: ExerciseIndex = find_negative_peaks(centered, params)
        self.count_: int = self.index_.count
        return self

    def fit_predict(self, X, y=None) -> ExerciseIndex:
        return self.fit(X, y).index_
