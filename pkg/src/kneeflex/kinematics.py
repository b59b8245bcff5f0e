"""Knee-angle geometry and the two rule-based safety detectors.

The knee angle is the interior angle at the knee between the thigh
segment (knee to hip) and the calf segment (knee to ankle), in degrees:
180 is a straight leg, 90 a deep squat. Side-view (sagittal) analysis
works in the image plane and ignores depth; front-view (frontal)
analysis includes the z coordinate so the angle stays meaningful when
the knee travels toward the camera.

Two ways to compute the angle are provided:

- ``angle_law_of_cosines``: from the three squared segment lengths of
  the hip/knee/ankle triangle. This is the canonical path used by the
  pipeline.
- ``angle_right_triangle_decomposition``: from a reference (straight
  leg) position of hip and ankle plus their current positions, as
  180 minus the two right-triangle angles swept by hip and ankle. It
  assumes the current points sit at the foot of a perpendicular from
  the reference points (ratios current/reference length <= 1) and is
  kept as an independently checkable alternative; pipeline code does
  not call it because choosing the reference frame is a capture-site
  decision.

Safety rules (both return 0/1 per frame and side):

- sagittal: flag when the knee travels past the foot index along the
  facing direction, with facing inferred from the foot-index/ankle
  x order so either walking-in direction works.
- frontal: flag when the knee deviates off the hip-ankle line toward
  the body midline (inward collapse); deviations within ``epsilon`` of
  collinear never alert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConstructionError, DegenerateGeometryError, MissingLandmarkError
from .model import KneeMetricsRow, KneeSide, LandmarkFrame, PoseSeries, ViewPlane, slot_name
from .validation import check_non_negative, check_pose_series

DEFAULT_COLLINEAR_TOL = 1e-9


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise ValueError(f"point components must be finite, got {self}")


@dataclass(frozen=True)
class AngleParams:
    """Per-view analysis parameters.

    ``side`` selects the knee for single-knee operations; metrics
    computation always evaluates both knees. ``sagittal_margin`` is the
    normalized-x tolerance of the knee-past-foot rule, ``frontal_epsilon``
    the collinearity tolerance of the inward-collapse rule, and
    ``collinear_tol`` the degeneracy tolerance of the angle math.
    """

    view: ViewPlane = ViewPlane.SAGITTAL
    side: KneeSide = KneeSide.RIGHT
    sagittal_margin: float = 0.0
    frontal_epsilon: float = 0.0
    collinear_tol: float = DEFAULT_COLLINEAR_TOL

    def __post_init__(self):
        object.__setattr__(self, "view", ViewPlane(self.view))
        object.__setattr__(self, "side", KneeSide(self.side))
        check_non_negative("sagittal_margin", self.sagittal_margin)
        check_non_negative("frontal_epsilon", self.frontal_epsilon)
        check_non_negative("collinear_tol", self.collinear_tol)


def _distance_sq(p, q, use_z: bool) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    dz = (p.z - q.z) if use_z else 0.0
    return dx * dx + dy * dy + dz * dz


def _distance(p, q, use_z: bool) -> float:
    return math.sqrt(_distance_sq(p, q, use_z))


def angle_law_of_cosines(
    a,
    b,
    c,
    use_z: bool = False,
    collinear_tol: float = DEFAULT_COLLINEAR_TOL,
) -> float:
    """Interior angle at b of triangle (a, b, c), in degrees.

    Computed from segment lengths as
    arccos((BC^2 + AB^2 - AC^2) / (2 * BC * AB)), with the cosine
    argument clamped to [-1, 1] so roundoff can never produce NaN.
    With ``use_z`` false the z components are ignored (2-D plane
    assumption for side views). Raises DegenerateGeometryError when
    either segment at b is shorter than ``collinear_tol``.
    """
    ab_sq = _distance_sq(a, b, use_z)
    bc_sq = _distance_sq(b, c, use_z)
    ab = math.sqrt(ab_sq)
    bc = math.sqrt(bc_sq)
    if ab <= collinear_tol or bc <= collinear_tol:
        raise DegenerateGeometryError(
            f"segment at the angle vertex is degenerate (|ab|={ab:.3e}, |bc|={bc:.3e})"
        )
    ac_sq = _distance_sq(a, c, use_z)
    cos_angle = (bc_sq + ab_sq - ac_sq) / (2.0 * bc * ab)
    cos_angle = min(1.0, max(-1.0, cos_angle))
    return math.degrees(math.acos(cos_angle))


def angle_right_triangle_decomposition(
    a0,
    a1,
    c0,
    c1,
    b,
    collinear_tol: float = DEFAULT_COLLINEAR_TOL,
) -> float:
    """Interior angle at b between current hip a1 and current ankle c1.

    a0 and c0 are the reference (straight-leg) hip and ankle positions.
    Under the right-angle construction each current point is the foot of
    a perpendicular dropped inside the reference triangle, so the swept
    angle at b satisfies cos = |current-b| / |reference-b| and

        angle = 180 - arccos(|a1 b| / |a0 b|) - arccos(|c1 b| / |c0 b|)

    Works in the image plane (z ignored), like all side-view math.
    Raises ConstructionError when a length ratio exceeds 1 beyond
    ``collinear_tol``, i.e. the geometry does not satisfy the
    construction.
    """
    a0b = _distance(a0, b, use_z=False)
    c0b = _distance(c0, b, use_z=False)
    if a0b <= collinear_tol or c0b <= collinear_tol:
        raise DegenerateGeometryError(
            f"reference segment is degenerate (|a0 b|={a0b:.3e}, |c0 b|={c0b:.3e})"
        )
    swept = []
    for current, reference in ((_distance(a1, b, False), a0b), (_distance(c1, b, False), c0b)):
        ratio = current / reference
        if ratio > 1.0 + collinear_tol:
            raise ConstructionError(
                f"length ratio {ratio:.12f} exceeds 1: points do not satisfy the "
                "right-angle construction"
            )
        swept.append(math.degrees(math.acos(min(ratio, 1.0))))
    return 180.0 - swept[0] - swept[1]


def _require(frame: LandmarkFrame, side: KneeSide, joint: str):
    landmark = frame.get(side, joint)
    if landmark is None or not landmark.is_finite:
        raise MissingLandmarkError(slot_name(side, joint), frame.frame_index)
    return landmark


def knee_angle(frame: LandmarkFrame, params: AngleParams) -> float:
    """Knee angle of the configured side for one frame, in degrees.

    Frontal view uses full 3-D coordinates; sagittal view projects onto
    the image plane. Raises MissingLandmarkError naming the first absent
    slot.
    """
    hip = _require(frame, params.side, "hip")
    knee = _require(frame, params.side, "knee")
    ankle = _require(frame, params.side, "ankle")
    use_z = params.view is ViewPlane.FRONTAL
    return angle_law_of_cosines(hip, knee, ankle, use_z=use_z, collinear_tol=params.collinear_tol)


def sagittal_alert(frame: LandmarkFrame, side: KneeSide, margin: float = 0.0) -> int:
    """1 when the knee is past the foot index along the facing direction.

    Facing is the sign of (foot_index.x - ankle.x); a frame with an
    indeterminate facing (foot index exactly above the ankle) never
    alerts. Mirroring the frame horizontally flips the facing together
    with the pose, so the alert value is mirror-invariant.
    """
    check_non_negative("margin", margin)
    knee = _require(frame, side, "knee")
    ankle = _require(frame, side, "ankle")
    foot = _require(frame, side, "foot_index")
    facing = foot.x - ankle.x
    if facing == 0.0:
        return 0
    facing = 1.0 if facing > 0 else -1.0
    return 1 if (knee.x - foot.x) * facing > margin else 0


def frontal_alert(frame: LandmarkFrame, side: KneeSide, epsilon: float = 0.0) -> int:
    """1 when the knee collapses inward off the hip-ankle line.

    The deviation is the doubled signed area of (hip, knee, ankle) in
    the image plane; magnitudes at or below ``epsilon`` count as
    collinear and never alert. "Inward" means the knee sits on the same
    side of the hip-ankle line as the body midline (the mean of the two
    hip x positions, taken at knee height).
    """
    check_non_negative("epsilon", epsilon)
    hip = _require(frame, side, "hip")
    knee = _require(frame, side, "knee")
    ankle = _require(frame, side, "ankle")
    left_hip = _require(frame, KneeSide.LEFT, "hip")
    right_hip = _require(frame, KneeSide.RIGHT, "hip")

    deviation = (knee.x - hip.x) * (ankle.y - hip.y) - (ankle.x - hip.x) * (knee.y - hip.y)
    if abs(deviation) <= epsilon:
        return 0
    midline_x = 0.5 * (left_hip.x + right_hip.x)
    toward_mid = (midline_x - hip.x) * (ankle.y - hip.y) - (ankle.x - hip.x) * (knee.y - hip.y)
    return 1 if deviation * toward_mid > 0 else 0


def compute_metrics(series: PoseSeries, params: AngleParams) -> list[KneeMetricsRow]:
    """Per-frame knee angles for both sides plus the configured view's alerts.

    Frames are expected to be preprocessed (see drop_nan_rows); if a
    frame still cannot be evaluated, its angle becomes a missing value
    and its alert flags stay 0 instead of aborting the batch. Alert
    flags of the view that is not being analyzed are always 0.
    """
    check_pose_series(series)
    per_side = {
        side: AngleParams(
            view=params.view,
            side=side,
            sagittal_margin=params.sagittal_margin,
            frontal_epsilon=params.frontal_epsilon,
            collinear_tol=params.collinear_tol,
        )
        for side in KneeSide
    }
    rows = []
    for frame in series.frames:
        angles: dict[KneeSide, float | None] = {}
        alerts: dict[KneeSide, int] = {}
        for side in KneeSide:
            try:
                angles[side] = knee_angle(frame, per_side[side])
            except (MissingLandmarkError, DegenerateGeometryError):
                angles[side] = None
            try:
                if params.view is ViewPlane.SAGITTAL:
                    alerts[side] = sagittal_alert(frame, side, params.sagittal_margin)
                else:
                    alerts[side] = frontal_alert(frame, side, params.frontal_epsilon)
            except MissingLandmarkError:
                alerts[side] = 0
        sagittal = params.view is ViewPlane.SAGITTAL
        rows.append(
            KneeMetricsRow(
                frame_index=frame.frame_index,
                timestamp_s=frame.timestamp_s,
                left_knee_angle_deg=angles[KneeSide.LEFT],
                right_knee_angle_deg=angles[KneeSide.RIGHT],
                sagittal_alert_left=alerts[KneeSide.LEFT] if sagittal else 0,
                sagittal_alert_right=alerts[KneeSide.RIGHT] if sagittal else 0,
                frontal_alert_left=0 if sagittal else alerts[KneeSide.LEFT],
                frontal_alert_right=0 if sagittal else alerts[KneeSide.RIGHT],
            )
        )
    return rows
