"""Acceptance suite: one test per release criterion, pinned tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail
line per criterion.
"""

import time
import xml.etree.ElementTree as ET

import numpy as np

from kneeflex import (
    AngleParams,
    CounterParams,
    KneeSide,
    Point3,
    ViewPlane,
    angle_law_of_cosines,
    angle_right_triangle_decomposition,
    brute_force_count,
    center_series,
    compute_metrics,
    counting_accuracy,
    drop_nan_rows,
    evaluate,
    find_negative_peaks,
    frontal_alert,
    render_plot,
    sagittal_alert,
    write_metrics_csv,
)
from kneeflex.synth import (
    Distractor,
    SynthSpec,
    generate_angle_series,
    generate_pose_series,
    inject_missing,
    metrics_rows_from_angles,
)

from conftest import dot_product_angle, make_frame, mirror_frame, right_angle_construction

# Per-file repetition totals of the reference recordings (video dataset summary).
DATASET_PROFILES = [
    ("IMG_1142.mp4", "sagittal", 5),
    ("IMG_1143.mp4", "sagittal", 12),
    ("IMG_1145.mp4", "sagittal", 11),
    ("IMG_1147.mp4", "sagittal", 14),
    ("IMG_1150.mp4", "sagittal", 31),
    ("IMG_2407.mp4", "sagittal", 12),
    ("IMG_2408.mp4", "frontal", 27),
    ("IMG_2409.mp4", "sagittal", 35),
    ("IMG_2410_5.mp4", "frontal", 32),
]


def _report(n, description, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] criterion {n}: {status} - {description}{suffix}")
    assert ok, f"criterion {n} failed: {description}{suffix}"


def test_criterion_1_angle_oracle_equivalence():
    rng = np.random.default_rng(1001)
    started = time.perf_counter()
    worst = 0.0
    checked = 0
    while checked < 1000:
        pts = rng.uniform(-10.0, 10.0, size=(3, 3))
        ba = pts[0] - pts[1]
        bc = pts[2] - pts[1]
        norm_ba = np.linalg.norm(ba)
        norm_bc = np.linalg.norm(bc)
        if min(norm_ba, norm_bc) < 1e-3:
            continue
        cos_angle = float(np.dot(ba, bc) / (norm_ba * norm_bc))
        if abs(cos_angle) > 1.0 - 1e-8:
            continue  # keep the triple non-degenerate
        a, b, c = (Point3(*p) for p in pts)
        got = angle_law_of_cosines(a, b, c, use_z=True)
        worst = max(worst, abs(got - dot_product_angle(a, b, c, use_z=True)))
        checked += 1
    elapsed = time.perf_counter() - started
    _report(
        1,
        "law-of-cosines matches the dot-product oracle on 1000 seeded triples",
        worst < 1e-9 and elapsed < 1.0,
        f"max deviation {worst:.2e} deg, {elapsed:.2f} s",
    )


def test_criterion_2_decomposition_agrees_with_law_of_cosines():
    rng = np.random.default_rng(1002)
    worst = 0.0
    for _ in range(100):
        a0, a1, c0, c1, b, expected = right_angle_construction(rng)
        decomposed = angle_right_triangle_decomposition(a0, a1, c0, c1, b)
        direct = angle_law_of_cosines(a1, b, c1)
        worst = max(worst, abs(decomposed - direct), abs(decomposed - expected))
    _report(
        2,
        "decomposition and law-of-cosines agree on 100 right-angle constructions",
        worst < 1e-6,
        f"max deviation {worst:.2e} deg",
    )


def test_criterion_3_synthetic_counting_exactness():
    params = CounterParams(std_threshold=0.5, min_exercise_seconds=2.0, fps=30.0)
    started = time.perf_counter()
    failures = []
    trials = 0
    for reps in (1, 5, 12, 31):
        for seed in range(25):
            # Distractor bumps sit right before and after the repetition
            # block, like pre/post-exercise shaking in real recordings.
            spec = SynthSpec(
                reps=reps,
                period_s=3.0,
                depth_deg=80.0,
                noise_sigma_deg=8.0,  # 10% of depth
                fps=30.0,
                seed=seed,
                lead_s=2.0,
                tail_s=2.0,
                distractors=(
                    Distractor(1.15, 0.8, 12.0),
                    Distractor(2.0 + reps * 3.0 + 0.05, 0.8, 12.0),
                ),
            )
            gen = generate_angle_series(spec)
            count = find_negative_peaks(center_series(gen.pairs), params).count
            trials += 1
            if count != reps:
                failures.append((reps, seed, count))
    elapsed = time.perf_counter() - started
    _report(
        3,
        "detected count equals ground truth on 100 noisy seeded sessions",
        not failures and trials == 100 and elapsed < 10.0,
        f"{trials - len(failures)}/{trials} exact, {elapsed:.2f} s"
        + (f", failures {failures[:3]}" if failures else ""),
    )


def test_criterion_4_oracle_equivalence_sweep():
    params = CounterParams(std_threshold=0.5, min_exercise_seconds=2.0, fps=30.0)
    disagreements = []
    for seed in range(200):
        rng = np.random.default_rng(10_000 + seed)
        reps = int(rng.integers(1, 16))
        depth = float(rng.uniform(45.0, 90.0))
        spec = SynthSpec(
            reps=reps,
            period_s=float(rng.uniform(2.5, 5.0)),
            depth_deg=depth,
            noise_sigma_deg=float(rng.uniform(0.0, 0.1 * depth)),
            fps=30.0,
            seed=seed,
            lead_s=3.0,
            tail_s=3.0,
            distractors=(Distractor(0.4, float(rng.uniform(0.5, 1.4)), float(rng.uniform(2.0, 6.0))),),
        )
        gen = generate_angle_series(spec)
        counted = find_negative_peaks(center_series(gen.pairs), params).count
        values = [float(v) for v in gen.angle_deg]
        mean = sum(values) / len(values)
        std = (sum((v - mean) ** 2 for v in values) / len(values)) ** 0.5
        brute = brute_force_count(values, std * params.std_threshold, params.min_distance_frames)
        if counted != brute:
            disagreements.append((seed, counted, brute))
    _report(
        4,
        "counter equals the brute-force oracle on 200 seeded spec variations",
        not disagreements,
        f"disagreements: {disagreements[:5] if disagreements else 'none'}",
    )


def test_criterion_5_affine_invariance():
    params = CounterParams(min_exercise_seconds=2.0, fps=30.0)
    gen = generate_angle_series(SynthSpec(reps=12, noise_sigma_deg=6.0, seed=55))
    reference = find_negative_peaks(center_series(gen.pairs), params)
    exact = True
    for a in (0.5, 2.0, 10.0):
        for b in (-50.0, 30.0):
            transformed = np.column_stack([gen.frame_index, a * gen.angle_deg + b])
            index = find_negative_peaks(center_series(transformed), params)
            if index.count != reference.count or index.frames != reference.frames:
                exact = False
    _report(
        5,
        "count and rep locations identical under x -> a*x + b",
        exact,
        f"count {reference.count} across 6 transforms",
    )


def test_criterion_6_accuracy_metric_semantics(tmp_path):
    lower_bound_ok = abs(counting_accuracy(11, 12) - 91.67) <= 0.01
    params = CounterParams(min_exercise_seconds=2.0, fps=30.0)
    for source_id, _, reps in DATASET_PROFILES:
        gen = generate_angle_series(SynthSpec(reps=reps, seed=reps))
        stem = source_id.rsplit(".", 1)[0]
        write_metrics_csv(metrics_rows_from_angles(gen), tmp_path / f"{stem}_metrics.csv")
    labels = tmp_path / "labels.csv"
    labels.write_text(
        "source_id,camera_view,exercise_total\n"
        + "\n".join(f"{sid},{view},{total}" for sid, view, total in DATASET_PROFILES)
        + "\n",
        encoding="utf-8",
    )
    table = evaluate(labels, tmp_path, params=params)
    per_file_ok = all(f["accuracy_pct"] == 100.0 for f in table["files"])
    overall = table["overall"]
    overall_ok = (
        overall["min_accuracy_pct"] == 100.0
        and overall["max_accuracy_pct"] == 100.0
        and overall["weighted_accuracy_pct"] == 100.0
        and overall["total_actual"] == 179
    )
    _report(
        6,
        "11/12 scores 91.67 +/- 0.01; all 9 dataset profiles score 100%",
        lower_bound_ok and per_file_ok and overall_ok and not table["missing"],
        f"weighted {overall['weighted_accuracy_pct']}%, total {overall['total_actual']}",
    )


def test_criterion_7_safety_rules():
    past = make_frame(
        r_ankle=(0.50, 0.90, 0.0), r_foot_index=(0.60, 0.92, 0.0), r_knee=(0.65, 0.60, 0.0)
    )
    behind = make_frame(
        r_ankle=(0.50, 0.90, 0.0), r_foot_index=(0.60, 0.92, 0.0), r_knee=(0.55, 0.60, 0.0)
    )
    sagittal_ok = sagittal_alert(past, KneeSide.RIGHT) == 1 and sagittal_alert(
        behind, KneeSide.RIGHT
    ) == 0

    collinear = make_frame(
        l_hip=(0.40, 0.30, 0.0),
        r_hip=(0.60, 0.30, 0.0),
        r_knee=(0.60, 0.60, 0.0),
        r_ankle=(0.60, 0.90, 0.0),
    )
    frontal_ok = frontal_alert(collinear, KneeSide.RIGHT) == 0

    spec = SynthSpec(reps=5, fault_windows=((3.1, 3.9), (9.2, 9.8)), fault_side="both")
    gen = generate_pose_series(spec, ViewPlane.FRONTAL)
    rows = compute_metrics(gen.series, AngleParams(view=ViewPlane.FRONTAL))
    mask_ok = np.array_equal(
        np.array([r.frontal_alert_left for r in rows], dtype=bool),
        gen.alert_mask[KneeSide.LEFT],
    ) and np.array_equal(
        np.array([r.frontal_alert_right for r in rows], dtype=bool),
        gen.alert_mask[KneeSide.RIGHT],
    )
    injected_ok = mask_ok and gen.alert_mask[KneeSide.RIGHT].sum() > 0

    rng = np.random.default_rng(1007)
    mirror_ok = True
    for _ in range(100):
        xs = rng.uniform(0.05, 0.95, size=3)
        frame = make_frame(
            r_knee=(xs[0], 0.6, 0.0),
            r_ankle=(xs[1], 0.9, 0.0),
            r_foot_index=(xs[2], 0.92, 0.0),
        )
        if sagittal_alert(frame, KneeSide.RIGHT) != sagittal_alert(
            mirror_frame(frame), KneeSide.RIGHT
        ):
            mirror_ok = False
    _report(
        7,
        "safety rules: past/behind thresholds, collinear silence, exact masks, mirror invariance",
        sagittal_ok and frontal_ok and injected_ok and mirror_ok,
    )


def test_criterion_8_preprocessing(tmp_path):
    spec = SynthSpec(reps=5, noise_sigma_deg=4.0, seed=88)
    gen = generate_pose_series(spec, ViewPlane.SAGITTAL)
    params = CounterParams(min_exercise_seconds=2.0, fps=30.0)

    protected = set()
    for trough in gen.trough_frames:
        protected.update(range(int(trough) - 15, int(trough) + 16))
    eligible = [f.frame_index for f in gen.series.frames if f.frame_index not in protected]
    rng = np.random.default_rng(1008)
    to_blank = rng.choice(eligible, size=len(gen.series) // 10, replace=False)
    holey = inject_missing(gen.series, to_blank)

    cleaned = drop_nan_rows(holey, visibility_min=0.5)
    rows = compute_metrics(cleaned, AngleParams(view=ViewPlane.SAGITTAL))
    no_nan = all(
        r.left_knee_angle_deg is not None
        and r.right_knee_angle_deg is not None
        and np.isfinite(r.left_knee_angle_deg)
        and np.isfinite(r.right_knee_angle_deg)
        for r in rows
    )

    holey_path = tmp_path / "holey.csv"
    write_metrics_csv(rows, holey_path)
    clean_rows = compute_metrics(gen.series, AngleParams(view=ViewPlane.SAGITTAL))
    clean_path = tmp_path / "clean.csv"
    write_metrics_csv(clean_rows, clean_path)

    from kneeflex import count_and_index

    holey_count = count_and_index(holey_path, params=params).count
    clean_count = count_and_index(clean_path, params=params).count
    _report(
        8,
        "no NaN survives preprocessing; 10% dropped rows leave the count unchanged",
        no_nan and holey_count == clean_count == 5,
        f"clean {clean_count}, filtered {holey_count}, rows {len(rows)}",
    )


def test_criterion_9_plot_contract(tmp_path):
    params = CounterParams(min_exercise_seconds=2.0, fps=30.0)
    gen = generate_angle_series(SynthSpec(reps=5, noise_sigma_deg=5.0, seed=99))
    centered = center_series(gen.pairs)
    index = find_negative_peaks(centered, params)
    path = tmp_path / "plot.svg"
    render_plot(centered, index, path, params=params)
    root = ET.parse(path).getroot()
    svg = "{http://www.w3.org/2000/svg}"
    markers = [e for e in root.iter(f"{svg}circle") if e.get("class") == "rep-marker"]
    thresholds = [e for e in root.iter(f"{svg}line") if e.get("class") == "threshold"]
    _report(
        9,
        "SVG has exactly count rep markers and a threshold line",
        len(markers) == index.count and len(thresholds) == 1,
        f"{len(markers)} markers for count {index.count}",
    )
