"""Shared builders for pose frames and reference geometries."""

import math

import numpy as np
import pytest

from kneeflex import Landmark, LandmarkFrame, PoseSeries

# A plausible standing pose facing +x (sagittal camera), all slots visible.
STANDING = {
    "l_hip": (0.51, 0.30, 0.0, 1.0),
    "r_hip": (0.49, 0.30, 0.0, 1.0),
    "l_knee": (0.51, 0.60, 0.0, 1.0),
    "r_knee": (0.49, 0.60, 0.0, 1.0),
    "l_ankle": (0.51, 0.90, 0.0, 1.0),
    "r_ankle": (0.49, 0.90, 0.0, 1.0),
    "l_foot_index": (0.58, 0.92, 0.0, 1.0),
    "r_foot_index": (0.56, 0.92, 0.0, 1.0),
}


def make_frame(frame_index=0, fps=30.0, **overrides) -> LandmarkFrame:
    """Standing-pose frame; override slots with tuples or None (=missing)."""
    landmarks = {}
    for slot, default in STANDING.items():
        value = overrides.get(slot, default)
        if value is None:
            landmarks[slot] = None
        else:
            landmarks[slot] = Landmark(*value)
    return LandmarkFrame(frame_index=frame_index, timestamp_s=frame_index / fps, landmarks=landmarks)


def make_series(frames, fps=30.0, source_id="test") -> PoseSeries:
    return PoseSeries(fps=fps, frames=tuple(frames), source_id=source_id)


def mirror_frame(frame: LandmarkFrame) -> LandmarkFrame:
    """Reflect a frame horizontally (x -> 1 - x), keeping slot names."""
    landmarks = {}
    for slot, lm in frame.landmarks.items():
        landmarks[slot] = None if lm is None else Landmark(1.0 - lm.x, lm.y, lm.z, lm.visibility)
    return LandmarkFrame(frame.frame_index, frame.timestamp_s, landmarks)


def swap_sides(frame: LandmarkFrame) -> LandmarkFrame:
    """Swap the left and right slot contents."""
    landmarks = {}
    for slot, lm in frame.landmarks.items():
        other = ("r" + slot[1:]) if slot.startswith("l") else ("l" + slot[1:])
        landmarks[other] = lm
    return LandmarkFrame(frame.frame_index, frame.timestamp_s, landmarks)


def dot_product_angle(a, b, c, use_z=False) -> float:
    """Independent oracle: arccos of the normalized dot product at b."""
    pa = np.array([a.x, a.y, a.z if use_z else 0.0])
    pb = np.array([b.x, b.y, b.z if use_z else 0.0])
    pc = np.array([c.x, c.y, c.z if use_z else 0.0])
    ba = pa - pb
    bc = pc - pb
    cos_angle = np.dot(ba, bc) / (np.linalg.norm(ba) * np.linalg.norm(bc))
    return float(np.degrees(np.arccos(np.clip(cos_angle, -1.0, 1.0))))


def _rot(v, angle_rad):
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    return (v[0] * c - v[1] * s, v[0] * s + v[1] * c)


def right_angle_construction(rng):
    """Random planar geometry satisfying the decomposition's construction.

    Returns (a0, a1, c0, c1, b, expected_angle_deg): a0/c0 are collinear
    reference points through b; a1/c1 are placed so each forms a right
    angle with its reference point, sweeping theta_a/theta_c at b.
    """
    from kneeflex import Point3

    theta_a = rng.uniform(5.0, 80.0)
    theta_c = rng.uniform(5.0, 80.0)
    len_a = rng.uniform(0.5, 2.0)
    len_c = rng.uniform(0.5, 2.0)
    bx, by = rng.uniform(-5.0, 5.0, size=2)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    u = (math.cos(phi), math.sin(phi))
    s = 1.0 if rng.integers(0, 2) else -1.0

    a0 = Point3(bx + len_a * u[0], by + len_a * u[1], 0.0)
    c0 = Point3(bx - len_c * u[0], by - len_c * u[1], 0.0)
    da = _rot(u, -s * math.radians(theta_a))
    a1 = Point3(
        bx + len_a * math.cos(math.radians(theta_a)) * da[0],
        by + len_a * math.cos(math.radians(theta_a)) * da[1],
        0.0,
    )
    dc = _rot((-u[0], -u[1]), s * math.radians(theta_c))
    c1 = Point3(
        bx + len_c * math.cos(math.radians(theta_c)) * dc[0],
        by + len_c * math.cos(math.radians(theta_c)) * dc[1],
        0.0,
    )
    b = Point3(bx, by, 0.0)
    return a0, a1, c0, c1, b, 180.0 - theta_a - theta_c


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
