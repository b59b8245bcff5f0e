"""Knee-rehabilitation analytics over pose-landmark timeseries.

Converts per-frame body landmarks (hips, knees, ankles, foot indices)
into diagnostic knee angles, rule-based safety alerts, adaptive
repetition counts and indexed session reports. Ships a synthetic
motion generator with exact ground truth so the whole pipeline is
verifiable end to end without any video data.
"""

from .counter import (
    CenteredSeries,
    CounterParams,
    ExerciseIndex,
    RepPeak,
    center_series,
    count_and_index,
    find_negative_peaks,
)
from .errors import (
    ConstructionError,
    DegenerateGeometryError,
    EmptySeriesError,
    InsufficientDataError,
    KneeflexError,
    MissingLandmarkError,
    SchemaError,
)
from .estimators import KneeMetricsTransformer, NanRowFilter, RepCounter
from .kinematics import (
    AngleParams,
    Point3,
    angle_law_of_cosines,
    angle_right_triangle_decomposition,
    compute_metrics,
    frontal_alert,
    knee_angle,
    sagittal_alert,
)
from .model import (
    LANDMARK_SLOTS,
    KneeMetricsRow,
    KneeSide,
    Landmark,
    LandmarkFrame,
    PoseSeries,
    ViewPlane,
)
from .plotting import render_plot
from .pose_io import parse_pose_csv, read_metrics_csv, write_metrics_csv, write_pose_csv
from .preprocess import drop_nan_rows
from .session import (
    LabelEntry,
    SessionReport,
    analyze,
    counting_accuracy,
    emit_trim_commands,
    evaluate,
    read_report,
    write_report,
)
from .synth import (
    Distractor,
    GeneratedAngleSeries,
    GeneratedPoseSeries,
    SynthSpec,
    brute_force_count,
    generate_angle_series,
    generate_pose_series,
    inject_missing,
    metrics_rows_from_angles,
)

__version__ = "0.1.0"

__all__ = [
    "AngleParams",
    "CenteredSeries",
    "ConstructionError",
    "CounterParams",
    "DegenerateGeometryError",
    "Distractor",
    "EmptySeriesError",
    "ExerciseIndex",
    "GeneratedAngleSeries",
    "GeneratedPoseSeries",
    "InsufficientDataError",
    "KneeMetricsRow",
    "KneeMetricsTransformer",
    "KneeSide",
    "KneeflexError",
    "LabelEntry",
    "LANDMARK_SLOTS",
    "Landmark",
    "LandmarkFrame",
    "MissingLandmarkError",
    "NanRowFilter",
    "Point3",
    "PoseSeries",
    "RepCounter",
    "RepPeak",
    "SchemaError",
    "SessionReport",
    "SynthSpec",
    "ViewPlane",
    "analyze",
    "angle_law_of_cosines",
    "angle_right_triangle_decomposition",
    "brute_force_count",
    "center_series",
    "compute_metrics",
    "count_and_index",
    "counting_accuracy",
    "drop_nan_rows",
    "emit_trim_commands",
    "evaluate",
    "find_negative_peaks",
    "frontal_alert",
    "generate_angle_series",
    "generate_pose_series",
    "inject_missing",
    "knee_angle",
    "metrics_rows_from_angles",
    "parse_pose_csv",
    "read_metrics_csv",
    "read_report",
    "render_plot",
    "sagittal_alert",
    "write_metrics_csv",
    "write_pose_csv",
    "write_report",
]
