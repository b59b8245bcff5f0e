"""Synthetic knee-exercise generator and an independent counting oracle.

Stands in for real rehabilitation videos in quantitative tests: it
produces angle waveforms and full pose-landmark series with exact
ground truth (trough frames, alert masks), plus a brute-force counter
that shares no code with the production counter.

An N-repetition session is a constant standing angle with one smooth
raised-cosine dip per repetition, optional short distractor bumps
(shaking, knee lifts and similar random movements), and seeded Gaussian
noise. Pose series place hip/knee/ankle/foot-index so that the computed
knee angle reproduces the waveform; on requested fault frames the
geometry is perturbed to violate exactly one safety rule, and the
construction is self-checked so the returned alert masks are exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .model import (
    LANDMARK_SLOTS,
    KneeMetricsRow,
    KneeSide,
    Landmark,
    LandmarkFrame,
    PoseSeries,
    ViewPlane,
)


class SynthSpecError(ValueError):
    """The requested synthetic session is inconsistent."""


@dataclass(frozen=True)
class Distractor:
    """A short non-exercise dip: starts at start_s, lasts duration_s seconds."""

    start_s: float
    duration_s: float
    depth_deg: float

    @property
    def end_s(self) -> float:
        return self.start_s + self.duration_s


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic exercise session.

    Repetitions are contiguous raised-cosine dips of ``depth_deg`` below
    ``standing_deg``, one per ``period_s``, preceded by ``lead_s`` and
    followed by ``tail_s`` seconds of standing. Distractors must fit in
    the lead/tail/standing stretches and may not overlap repetitions or
    each other. ``fault_windows`` (seconds) request safety-rule
    violations from generate_pose_series on the ``fault_side`` leg(s).
    """

    reps: int
    period_s: float = 3.0
    standing_deg: float = 175.0
    depth_deg: float = 80.0
    noise_sigma_deg: float = 0.0
    distractors: tuple[Distractor, ...] = ()
    fps: float = 30.0
    seed: int = 0
    lead_s: float = 2.0
    tail_s: float = 2.0
    fault_windows: tuple[tuple[float, float], ...] = ()
    fault_side: str = "both"  # left, right or both

    def __post_init__(self):
        object.__setattr__(self, "distractors", tuple(self.distractors))
        object.__setattr__(
            self, "fault_windows", tuple((float(a), float(b)) for a, b in self.fault_windows)
        )
        if self.reps < 0 or self.reps != int(self.reps):
            raise SynthSpecError(f"reps must be a non-negative integer, got {self.reps}")
        if not self.period_s > 0:
            raise SynthSpecError(f"period_s must be positive, got {self.period_s}")
        if not 0 < self.standing_deg <= 180:
            raise SynthSpecError(f"standing_deg must be in (0, 180], got {self.standing_deg}")
        if not 0 < self.depth_deg < self.standing_deg:
            raise SynthSpecError(
                f"depth_deg must be in (0, standing_deg), got {self.depth_deg}"
            )
        if self.noise_sigma_deg < 0:
            raise SynthSpecError("noise_sigma_deg must be >= 0")
        if not self.fps > 0:
            raise SynthSpecError(f"fps must be positive, got {self.fps}")
        if self.lead_s < 0 or self.tail_s < 0:
            raise SynthSpecError("lead_s and tail_s must be >= 0")
        if self.fault_side not in ("left", "right", "both"):
            raise SynthSpecError(f"fault_side must be left/right/both, got {self.fault_side}")
        self._check_intervals()

    def _check_intervals(self):
        rep_spans = [(self.rep_start_s(k), self.rep_start_s(k) + self.period_s)
                     for k in range(self.reps)]
        spans = []
        for d in self.distractors:
            if d.start_s < 0 or d.end_s > self.total_s:
                raise SynthSpecError(f"distractor {d} lies outside the session")
            if not 0 < d.duration_s < self.period_s:
                raise SynthSpecError(
                    f"distractor duration must be in (0, period_s), got {d.duration_s}"
                )
            if d.depth_deg <= 0:
                raise SynthSpecError("distractor depth must be positive")
            for a, b in rep_spans:
                if d.start_s < b and d.end_s > a:
                    raise SynthSpecError(f"distractor {d} overlaps a repetition")
            for a, b in spans:
                if d.start_s < b and d.end_s > a:
                    raise SynthSpecError(f"distractor {d} overlaps another distractor")
            spans.append((d.start_s, d.end_s))
        for a, b in self.fault_windows:
            if not 0 <= a < b <= self.total_s:
                raise SynthSpecError(f"fault window ({a}, {b}) is not inside the session")

    def rep_start_s(self, k: int) -> float:
        return self.lead_s + k * self.period_s

    @property
    def total_s(self) -> float:
        return self.lead_s + self.reps * self.period_s + self.tail_s

    @property
    def n_frames(self) -> int:
        return int(round(self.total_s * self.fps))


def _raised_cosine(t: np.ndarray, start: float, duration: float, depth: float) -> np.ndarray:
    """Smooth dip of the given depth over [start, start + duration)."""
    phase = (t - start) / duration
    active = (phase >= 0.0) & (phase < 1.0)
    dip = np.zeros_like(t)
    dip[active] = depth * (1.0 - np.cos(2.0 * np.pi * phase[active])) / 2.0
    return dip


@dataclass(frozen=True)
class GeneratedAngleSeries:
    """A sampled waveform plus its construction ground truth."""

    frame_index: np.ndarray
    angle_deg: np.ndarray  # noisy, what a pipeline would see
    clean_angle_deg: np.ndarray
    trough_frames: np.ndarray
    spec: SynthSpec

    @property
    def pairs(self) -> np.ndarray:
        return np.column_stack([self.frame_index, self.angle_deg])


def generate_angle_series(spec: SynthSpec) -> GeneratedAngleSeries:
    """Sample the session waveform on the frame grid, with exact troughs.

    The ground-truth trough of each repetition is the deepest sample of
    the noise-free waveform within that repetition's window. Fixing the
    seed makes the output bit-identical across runs.
    """
    n = spec.n_frames
    if n < 2:
        raise SynthSpecError(f"session too short, only {n} frame(s)")
    t = np.arange(n, dtype=float) / spec.fps
    clean = np.full(n, spec.standing_deg, dtype=float)
    troughs = []
    for k in range(spec.reps):
        start = spec.rep_start_s(k)
        clean -= _raised_cosine(t, start, spec.period_s, spec.depth_deg)
        window = (t >= start) & (t < start + spec.period_s)
        idx = np.nonzero(window)[0]
        troughs.append(int(idx[np.argmin(clean[idx])]))
    for d in spec.distractors:
        clean -= _raised_cosine(t, d.start_s, d.duration_s, d.depth_deg)
    rng = np.random.default_rng(spec.seed)
    noisy = clean + rng.normal(0.0, spec.noise_sigma_deg, size=n) if spec.noise_sigma_deg else clean
    return GeneratedAngleSeries(
        frame_index=np.arange(n),
        angle_deg=noisy,
        clean_angle_deg=clean,
        trough_frames=np.asarray(troughs, dtype=int),
        spec=spec,
    )


@dataclass(frozen=True)
class GeneratedPoseSeries:
    """A full pose series plus exact ground truth for angles and alerts."""

    series: PoseSeries
    view: ViewPlane
    angle_deg: np.ndarray  # waveform the landmark geometry encodes
    trough_frames: np.ndarray
    alert_mask: dict[KneeSide, np.ndarray] = field(default_factory=dict)


def _fault_sides(spec: SynthSpec) -> tuple[KneeSide, ...]:
    if spec.fault_side == "both":
        return (KneeSide.LEFT, KneeSide.RIGHT)
    return (KneeSide(spec.fault_side),)


def _in_any_window(t: float, windows) -> bool:
    return any(a <= t < b for a, b in windows)


# Geometry constants of the synthetic body (normalized image units).
SEGMENT_LEN = 0.22  # thigh and calf length, sagittal view
LEAN_PER_DEG = 0.25  # calf forward lean per degree of flexion, sagittal view
FOOT_AHEAD = 0.05  # foot index ahead of the knee on clean frames
MIDLINE_X = 0.5
LEG_OFFSET_X = 0.10  # frontal: leg distance from the midline
HIP_Y, ANKLE_Y = 0.35, 0.85
VALGUS_SHIFT = 0.05  # frontal fault: knee x displacement toward the midline


def _sagittal_leg(theta_deg: float, base_x: float, fault: bool):
    """Place one side-view leg encoding the knee angle ``theta_deg``.

    The calf leans forward proportionally to flexion, so the knee
    travels ahead of the ankle as the squat deepens. On clean frames
    the foot index sits FOOT_AHEAD ahead of the knee (no alert); on
    fault frames it sits FOOT_AHEAD behind it (alert), which requires
    enough flexion for the facing direction to stay well defined.
    """
    ankle = (base_x, ANKLE_Y)
    beta = math.radians(LEAN_PER_DEG * (180.0 - theta_deg))
    knee = (ankle[0] + SEGMENT_LEN * math.sin(beta), ankle[1] - SEGMENT_LEN * math.cos(beta))
    calf = ((ankle[0] - knee[0]) / SEGMENT_LEN, (ankle[1] - knee[1]) / SEGMENT_LEN)
    rad = math.radians(theta_deg)
    candidates = []
    for sign in (1.0, -1.0):
        cos_t, sin_t = math.cos(sign * rad), math.sin(sign * rad)
        direction = (calf[0] * cos_t - calf[1] * sin_t, calf[0] * sin_t + calf[1] * cos_t)
        candidates.append(
            (knee[0] + SEGMENT_LEN * direction[0], knee[1] + SEGMENT_LEN * direction[1])
        )
    hip = min(candidates, key=lambda p: p[1])  # hip above the knee
    foot_x = knee[0] - FOOT_AHEAD if fault else knee[0] + FOOT_AHEAD
    foot = (foot_x, ankle[1] + 0.02)
    if fault and foot[0] - ankle[0] < 0.01:
        raise SynthSpecError(
            "sagittal fault window covers frames with too little knee flexion; "
            "move it toward a repetition trough"
        )
    return hip, knee, ankle, foot


def _frontal_leg(theta_deg: float, base_x: float, fault: bool):
    """Place one front-view leg encoding ``theta_deg`` via knee depth.

    Hip and ankle share the leg's x so the image-plane projection stays
    collinear (no alert) on clean frames; the knee moves toward the
    camera to flex. A fault displaces the knee x toward the body
    midline, which is inward collapse by construction.
    """
    half_span = (ANKLE_Y - HIP_Y) / 2.0
    hip = (base_x, HIP_Y, 0.0)
    ankle = (base_x, ANKLE_Y, 0.0)
    half_theta = math.radians(theta_deg) / 2.0
    knee_z = -half_span / math.tan(half_theta) if theta_deg < 180.0 else 0.0
    inward = 1.0 if MIDLINE_X > base_x else -1.0
    knee_x = base_x + VALGUS_SHIFT * inward if fault else base_x
    knee = (knee_x, (HIP_Y + ANKLE_Y) / 2.0, knee_z)
    foot = (base_x, ANKLE_Y + 0.05, -0.05)
    return hip, knee, ankle, foot


def generate_pose_series(spec: SynthSpec, view: ViewPlane = ViewPlane.SAGITTAL) -> GeneratedPoseSeries:
    """Generate landmark frames whose knee angles follow the waveform.

    Fault frames (spec.fault_windows on spec.fault_side) violate
    exactly the view's safety rule; the returned per-side masks mark
    them. The construction is validated frame by frame, so masks are
    exact by construction.
    """
    view = ViewPlane(view)
    gen = generate_angle_series(spec)
    angles = np.clip(gen.angle_deg, 1.0, 179.999)  # keep noisy geometry constructible
    fault_sides = _fault_sides(spec)
    masks = {side: np.zeros(len(angles), dtype=bool) for side in KneeSide}

    frames = []
    for i, theta in enumerate(angles):
        t = i / spec.fps
        landmarks: dict[str, Landmark | None] = {}
        for side in KneeSide:
            fault = bool(spec.fault_windows) and side in fault_sides and _in_any_window(
                t, spec.fault_windows
            )
            masks[side][i] = fault
            if view is ViewPlane.SAGITTAL:
                base_x = 0.45 + (0.01 if side is KneeSide.LEFT else 0.0)
                hip, knee, ankle, foot = _sagittal_leg(float(theta), base_x, fault)
                points = {
                    "hip": (*hip, 0.0),
                    "knee": (*knee, 0.0),
                    "ankle": (*ankle, 0.0),
                    "foot_index": (*foot, 0.0),
                }
            else:
                base_x = MIDLINE_X - LEG_OFFSET_X if side is KneeSide.LEFT else MIDLINE_X + LEG_OFFSET_X
                hip, knee, ankle, foot = _frontal_leg(float(theta), base_x, fault)
                points = {"hip": hip, "knee": knee, "ankle": ankle, "foot_index": foot}
            for joint, (x, y, z) in points.items():
                landmarks[f"{side.prefix}_{joint}"] = Landmark(x, y, z, visibility=1.0)
        frames.append(LandmarkFrame(frame_index=i, timestamp_s=t, landmarks=landmarks))

    series = PoseSeries(
        fps=spec.fps,
        frames=tuple(frames),
        source_id=f"synthetic_{view.value}_{spec.reps}reps_seed{spec.seed}",
    )
    return GeneratedPoseSeries(
        series=series,
        view=view,
        angle_deg=np.asarray(angles, dtype=float),
        trough_frames=gen.trough_frames,
        alert_mask={side: masks[side] for side in KneeSide},
    )


def metrics_rows_from_angles(gen: GeneratedAngleSeries) -> list[KneeMetricsRow]:
    """Turn a generated waveform into clean metrics rows (both knees, no alerts)."""
    return [
        KneeMetricsRow(
            frame_index=int(f),
            timestamp_s=int(f) / gen.spec.fps,
            left_knee_angle_deg=float(a),
            right_knee_angle_deg=float(a),
        )
        for f, a in zip(gen.frame_index, gen.angle_deg)
    ]


def inject_missing(series: PoseSeries, frame_indices, slots=None) -> PoseSeries:
    """Return a copy with the given slots blanked on the given frames.

    Used to simulate pose-engine dropouts; downstream NaN filtering then
    removes those frames.
    """
    targets = set(int(i) for i in frame_indices)
    slots = tuple(slots) if slots is not None else LANDMARK_SLOTS
    frames = []
    for frame in series.frames:
        if frame.frame_index in targets:
            landmarks = dict(frame.landmarks)
            for slot in slots:
                landmarks[slot] = None
            frames.append(
                LandmarkFrame(frame.frame_index, frame.timestamp_s, landmarks)
            )
        else:
            frames.append(frame)
    return PoseSeries(fps=series.fps, frames=tuple(frames), source_id=series.source_id)


def write_sidecar(gen: GeneratedPoseSeries | GeneratedAngleSeries, path) -> None:
    """Persist the generator's ground truth next to the CSV fixtures."""
    if isinstance(gen, GeneratedPoseSeries):
        payload = {
            "kind": "pose",
            "view": gen.view.value,
            "reps": int(len(gen.trough_frames)),
            "trough_frames": [int(f) for f in gen.trough_frames],
            "fault_frames": {
                side.value: [int(i) for i in np.nonzero(mask)[0]]
                for side, mask in gen.alert_mask.items()
            },
        }
    else:
        payload = {
            "kind": "angles",
            "reps": int(gen.spec.reps),
            "trough_frames": [int(f) for f in gen.trough_frames],
            "spec": asdict(gen.spec),
        }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def brute_force_count(angles, min_depth_deg: float, min_gap_frames: int, frames=None) -> int:
    """Count repetitions by exhaustive scanning; independent of the counter.

    Enumerates every local minimum directly (plateaus contribute their
    middle sample), keeps those deeper than ``min_depth_deg`` below the
    arithmetic mean, then greedily accepts minima deepest-first subject
    to pairwise spacing of at least ``min_gap_frames``. Implemented with
    plain loops on purpose: it shares no code with the production
    counter it cross-checks.
    """
    values = [float(v) for v in angles]
    n = len(values)
    if frames is None:
        positions = list(range(n))
    else:
        positions = [int(f) for f in frames]
        if len(positions) != n:
            raise ValueError("frames and angles must have equal length")
    if n < 3:
        return 0
    mean = sum(values) / n

    minima = []
    for i in range(1, n - 1):
        left = i - 1
        while left >= 0 and values[left] == values[i]:
            left -= 1
        right = i + 1
        while right < n and values[right] == values[i]:
            right += 1
        if left < 0 or right >= n:
            continue  # plateau touches an endpoint
        if values[left] > values[i] and values[right] > values[i]:
            # i sits on the minimal plateau [left+1, right-1]; record the middle once
            if i == (left + 1 + right - 1) // 2:
                minima.append(i)

    deep = [i for i in minima if (mean - values[i]) > min_depth_deg]
    deep.sort(key=lambda i: (values[i], positions[i]))
    kept: list[int] = []
    for i in deep:
        if all(abs(positions[i] - positions[k]) >= min_gap_frames for k in kept):
            kept.append(i)
    return len(kept)
