"""Domain types, CSV schemas and NaN-row preprocessing."""

import csv

import numpy as np
import pytest

from kneeflex import (
    EmptySeriesError,
    KneeMetricsRow,
    Landmark,
    LandmarkFrame,
    PoseSeries,
    SchemaError,
    drop_nan_rows,
    parse_pose_csv,
    read_metrics_csv,
    write_metrics_csv,
    write_pose_csv,
)
from kneeflex.pose_io import METRICS_COLUMNS, POSE_COLUMNS

from conftest import STANDING, make_frame, make_series


class TestTypes:
    def test_visibility_bounds(self):
        with pytest.raises(ValueError):
            Landmark(0.5, 0.5, 0.0, visibility=1.5)

    def test_frame_requires_all_slots(self):
        with pytest.raises(ValueError, match="lacks landmark slots"):
            LandmarkFrame(0, 0.0, {"l_hip": Landmark(0.1, 0.2)})

    def test_frame_rejects_unknown_slots(self):
        landmarks = {s: Landmark(*v) for s, v in STANDING.items()}
        landmarks["l_elbow"] = Landmark(0.5, 0.5)
        with pytest.raises(ValueError, match="unknown landmark slots"):
            LandmarkFrame(0, 0.0, landmarks)

    def test_series_requires_increasing_frames(self):
        frames = [make_frame(frame_index=3), make_frame(frame_index=3)]
        with pytest.raises(ValueError, match="strictly increasing"):
            PoseSeries(fps=30.0, frames=tuple(frames))

    def test_series_requires_positive_fps(self):
        with pytest.raises(ValueError, match="fps"):
            PoseSeries(fps=0.0, frames=(make_frame(),))

    def test_metrics_row_rejects_bad_flags(self):
        with pytest.raises(ValueError):
            KneeMetricsRow(0, 0.0, 170.0, 170.0, sagittal_alert_left=2)


def _write_pose_file(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


class TestParsePoseCsv:
    def test_identity_ingestion(self, tmp_path):
        series = make_series([make_frame(frame_index=i) for i in range(3)])
        path = tmp_path / "pose.csv"
        write_pose_csv(series, path)
        parsed = parse_pose_csv(path, fps=30.0)
        assert len(parsed) == 3
        assert [f.frame_index for f in parsed.frames] == [0, 1, 2]
        assert parsed.frames[1].landmarks == series.frames[1].landmarks

    def test_empty_cell_marks_landmark_missing(self, tmp_path):
        series = make_series([make_frame(frame_index=0)])
        path = tmp_path / "pose.csv"
        write_pose_csv(series, path)
        text = path.read_text(encoding="utf-8").splitlines()
        header = text[0].split(",")
        cells = text[1].split(",")
        cells[header.index("r_knee_x")] = ""
        path.write_text("\n".join([text[0], ",".join(cells)]) + "\n", encoding="utf-8")
        parsed = parse_pose_csv(path)
        assert parsed.frames[0].landmarks["r_knee"] is None
        assert parsed.frames[0].landmarks["l_knee"] is not None

    def test_literal_nan_cell_marks_missing(self, tmp_path):
        series = make_series([make_frame(frame_index=0)])
        path = tmp_path / "pose.csv"
        write_pose_csv(series, path)
        text = path.read_text(encoding="utf-8").splitlines()
        header = text[0].split(",")
        cells = text[1].split(",")
        cells[header.index("l_ankle_z")] = "NaN"
        path.write_text("\n".join([text[0], ",".join(cells)]) + "\n", encoding="utf-8")
        assert parse_pose_csv(path).frames[0].landmarks["l_ankle"] is None

    def test_shuffled_columns_parse_identically(self, tmp_path, rng):
        series = make_series([make_frame(frame_index=i) for i in range(4)])
        canonical = tmp_path / "canonical.csv"
        write_pose_csv(series, canonical)
        with canonical.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        order = rng.permutation(len(POSE_COLUMNS))
        shuffled = tmp_path / "shuffled.csv"
        _write_pose_file(
            shuffled, [rows[0][i] for i in order], [[r[i] for i in order] for r in rows[1:]]
        )
        a = parse_pose_csv(canonical, fps=30.0)
        b = parse_pose_csv(shuffled, fps=30.0)
        assert a.frames == b.frames

    def test_malformed_header_names_first_bad_column(self, tmp_path):
        header = [c for c in POSE_COLUMNS if c != "l_knee_x"]
        path = tmp_path / "bad.csv"
        _write_pose_file(path, header, [])
        with pytest.raises(SchemaError, match="l_knee_x"):
            parse_pose_csv(path)

    def test_unreadable_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            parse_pose_csv(tmp_path / "does_not_exist.csv")

    def test_non_integer_frame_rejected(self, tmp_path):
        path = tmp_path / "bad_frame.csv"
        _write_pose_file(path, list(POSE_COLUMNS), [["x", "0.0"] + ["0.1"] * 32])
        with pytest.raises(SchemaError, match="frame index"):
            parse_pose_csv(path)


class TestDropNanRows:
    def test_filters_missing_and_keeps_indices(self):
        frames = [
            make_frame(frame_index=i, r_knee=None if i % 10 == 0 else STANDING["r_knee"])
            for i in range(100)
        ]
        cleaned = drop_nan_rows(make_series(frames), visibility_min=0.0)
        assert len(cleaned) == 90
        assert all(f.frame_index % 10 != 0 for f in cleaned.frames)

    def test_identity_when_all_complete(self):
        series = make_series([make_frame(frame_index=i) for i in range(5)])
        assert drop_nan_rows(series, visibility_min=0.0) is series

    def test_visibility_threshold(self):
        frames = [
            make_frame(frame_index=0),
            make_frame(frame_index=1, l_ankle=(0.51, 0.9, 0.0, 0.4)),
        ]
        cleaned = drop_nan_rows(make_series(frames), visibility_min=0.5)
        assert [f.frame_index for f in cleaned.frames] == [0]
        kept = drop_nan_rows(make_series(frames), visibility_min=0.3)
        assert len(kept) == 2

    def test_idempotent(self):
        frames = [
            make_frame(frame_index=i, l_hip=None if i in (2, 5) else STANDING["l_hip"])
            for i in range(10)
        ]
        once = drop_nan_rows(make_series(frames))
        twice = drop_nan_rows(once)
        assert once.frames == twice.frames

    def test_never_reorders_or_alters(self, rng):
        frames = []
        for i in range(50):
            if rng.random() < 0.3:
                frames.append(make_frame(frame_index=i, r_foot_index=None))
            else:
                frames.append(make_frame(frame_index=i))
        series = make_series(frames)
        cleaned = drop_nan_rows(series)
        survivors = {f.frame_index: f for f in series.frames if f.complete}
        assert [f.frame_index for f in cleaned.frames] == sorted(survivors)
        for frame in cleaned.frames:
            assert frame == survivors[frame.frame_index]

    def test_output_has_no_missing_landmarks(self, rng):
        frames = [
            make_frame(frame_index=i, l_knee=None if rng.random() < 0.2 else STANDING["l_knee"])
            for i in range(40)
        ]
        cleaned = drop_nan_rows(make_series(frames), visibility_min=0.5)
        for frame in cleaned.frames:
            assert frame.complete
            assert all(lm.visibility >= 0.5 for lm in frame.landmarks.values())

    def test_empty_result_raises(self):
        frames = [make_frame(frame_index=i, r_hip=None) for i in range(5)]
        with pytest.raises(EmptySeriesError):
            drop_nan_rows(make_series(frames))


def _random_rows(rng, n):
    rows = []
    frame = 0
    for i in range(n):
        frame += int(rng.integers(1, 5))
        rows.append(
            KneeMetricsRow(
                frame_index=frame,
                timestamp_s=float(rng.uniform(0, 100)),
                left_knee_angle_deg=float(rng.uniform(30, 180)),
                right_knee_angle_deg=None if rng.random() < 0.1 else float(rng.uniform(30, 180)),
                sagittal_alert_left=int(rng.integers(0, 2)),
                sagittal_alert_right=int(rng.integers(0, 2)),
                frontal_alert_left=int(rng.integers(0, 2)),
                frontal_alert_right=int(rng.integers(0, 2)),
            )
        )
    return rows


class TestMetricsCsv:
    def test_empty_list_writes_header_only(self, tmp_path):
        path = tmp_path / "metrics.csv"
        write_metrics_csv([], path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines == [",".join(METRICS_COLUMNS)]
        assert read_metrics_csv(path) == []

    def test_single_row_two_lines(self, tmp_path):
        path = tmp_path / "metrics.csv"
        write_metrics_csv([KneeMetricsRow(0, 0.0, 170.0, 171.5)], path)
        assert len(path.read_text(encoding="utf-8").splitlines()) == 2

    def test_round_trip_structural_equality(self, tmp_path, rng):
        rows = _random_rows(rng, 50)
        path = tmp_path / "metrics.csv"
        write_metrics_csv(rows, path)
        assert read_metrics_csv(path) == rows

    def test_round_trip_is_bit_exact_for_awkward_floats(self, tmp_path):
        rows = [
            KneeMetricsRow(0, 1.0 / 3.0, 100.0 + 1e-13, 179.99999999999997),
            KneeMetricsRow(7, 0.23333333333333334, np.nextafter(90.0, 91.0), None),
        ]
        path = tmp_path / "metrics.csv"
        write_metrics_csv(rows, path)
        back = read_metrics_csv(path)
        assert back[0].timestamp_s == rows[0].timestamp_s
        assert back[0].left_knee_angle_deg == rows[0].left_knee_angle_deg
        assert back[1].left_knee_angle_deg == rows[1].left_knee_angle_deg
        assert back[1].right_knee_angle_deg is None

    def test_unsorted_rows_rejected(self, tmp_path):
        rows = [KneeMetricsRow(5, 0.1, 170.0, 170.0), KneeMetricsRow(2, 0.0, 170.0, 170.0)]
        with pytest.raises(ValueError, match="ordered"):
            write_metrics_csv(rows, tmp_path / "metrics.csv")

    def test_missing_column_raises_schema_error(self, tmp_path):
        path = tmp_path / "broken.csv"
        path.write_text("frame,timestamp_s\n0,0.0\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="left_knee_angle_deg"):
            read_metrics_csv(path)
