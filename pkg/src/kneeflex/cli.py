"""Command-line interface: analyze, evaluate, synth and trim subcommands.

Exit codes: 0 success, 1 usage error, 2 data/schema error, 3 empty or
too-short series. All processing is local file I/O.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .counter import CounterParams
from .errors import (
    ConstructionError,
    DegenerateGeometryError,
    EmptySeriesError,
    InsufficientDataError,
    MissingLandmarkError,
    SchemaError,
)
from .model import ViewPlane
from .pose_io import write_metrics_csv, write_pose_csv
from .session import analyze, emit_trim_commands, evaluate, read_report
from .synth import (
    Distractor,
    SynthSpec,
    generate_angle_series,
    generate_pose_series,
    metrics_rows_from_angles,
    write_sidecar,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EMPTY = 3


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with the package's usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_counter_flags(parser):
    parser.add_argument("--fps", type=float, default=30.0, help="frames per second (default 30)")
    parser.add_argument(
        "--std-threshold",
        type=float,
        default=0.5,
        help="std multiplier for the minimum peak depth (default 0.5)",
    )
    parser.add_argument(
        "--min-exercise-seconds",
        type=float,
        default=4.0,
        help="shortest plausible repetition, seconds (default 4.0)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="kneeflex",
        description="Knee-angle metrics, safety alerts and repetition counting "
        "for pose-landmark CSV timeseries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one pose CSV into metrics, plot and report")
    p.add_argument("--input", required=True, help="pose CSV path")
    p.add_argument("--view", choices=["sagittal", "frontal"], default="sagittal")
    p.add_argument("--side", choices=["left", "right"], default="right")
    p.add_argument("--visibility-min", type=float, default=0.5)
    p.add_argument("--sagittal-margin", type=float, default=0.0)
    p.add_argument("--frontal-epsilon", type=float, default=0.0)
    p.add_argument("--out-dir", default="session", help="output directory (default ./session)")
    p.add_argument("--plot", default=None, help="custom path for the SVG plot")
    _add_counter_flags(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("evaluate", help="score detected counts against a labels file")
    p.add_argument("--labels", required=True, help="labels CSV (source_id,camera_view,exercise_total)")
    p.add_argument("--input", required=True, help="directory of metrics CSV files")
    p.add_argument("--side", choices=["left", "right"], default="right")
    p.add_argument("--out", default=None, help="also write the JSON table to this path")
    _add_counter_flags(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("synth", help="generate synthetic fixtures with ground truth")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--period-seconds", type=float, default=3.0)
    p.add_argument("--standing-deg", type=float, default=175.0)
    p.add_argument("--depth-deg", type=float, default=80.0)
    p.add_argument("--noise-sigma-deg", type=float, default=0.0)
    p.add_argument("--lead-seconds", type=float, default=2.0)
    p.add_argument("--tail-seconds", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--view", choices=["sagittal", "frontal"], default="sagittal")
    p.add_argument(
        "--distractor",
        action="append",
        default=[],
        metavar="START:DUR:DEPTH",
        help="add a distractor bump (seconds:seconds:degrees); repeatable",
    )
    p.add_argument(
        "--fault-window",
        action="append",
        default=[],
        metavar="START:END",
        help="inject safety-rule faults over this window (seconds); repeatable",
    )
    p.add_argument("--fault-side", choices=["left", "right", "both"], default="both")
    p.add_argument("--kind", choices=["pose", "metrics", "both"], default="both")
    p.add_argument("--name", default=None, help="fixture base name")
    p.add_argument("--out-dir", default="fixtures")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("trim", help="emit transcoder commands for detected repetitions")
    p.add_argument("--report", required=True, help="session report JSON")
    p.add_argument("--video", required=True, help="source video path")
    p.add_argument("--margin-seconds", type=float, default=2.0)
    p.add_argument("--fps", type=float, default=None, help="re-derive times from frame indices")
    p.set_defaults(func=_cmd_trim)

    return parser


def _cmd_analyze(args) -> int:
    report, _ = analyze(
        args.input,
        args.out_dir,
        view=args.view,
        side=args.side,
        fps=args.fps,
        visibility_min=args.visibility_min,
        std_threshold=args.std_threshold,
        min_exercise_seconds=args.min_exercise_seconds,
        sagittal_margin=args.sagittal_margin,
        frontal_epsilon=args.frontal_epsilon,
        plot_path=args.plot,
    )
    print(report.count)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    params = CounterParams(
        std_threshold=args.std_threshold,
        min_exercise_seconds=args.min_exercise_seconds,
        fps=args.fps,
    )
    table = evaluate(
        args.labels,
        args.input,
        params=params,
        selected_column=f"{args.side}_knee_angle_deg",
    )
    text = json.dumps(table, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    if table["missing"]:
        print(f"missing metrics for: {', '.join(table['missing'])}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def _parse_triplet(text: str) -> Distractor:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected START:DUR:DEPTH, got {text!r}")
    return Distractor(float(parts[0]), float(parts[1]), float(parts[2]))


def _parse_window(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"expected START:END, got {text!r}")
    return float(parts[0]), float(parts[1])


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        reps=args.reps,
        period_s=args.period_seconds,
        standing_deg=args.standing_deg,
        depth_deg=args.depth_deg,
        noise_sigma_deg=args.noise_sigma_deg,
        distractors=tuple(_parse_triplet(t) for t in args.distractor),
        fps=args.fps,
        seed=args.seed,
        lead_s=args.lead_seconds,
        tail_s=args.tail_seconds,
        fault_windows=tuple(_parse_window(t) for t in args.fault_window),
        fault_side=args.fault_side,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    name = args.name or f"synthetic_{args.reps}reps_seed{args.seed}"
    written = []

    if args.kind in ("pose", "both"):
        gen_pose = generate_pose_series(spec, view=ViewPlane(args.view))
        pose_path = out_dir / f"{name}_pose.csv"
        write_pose_csv(gen_pose.series, pose_path)
        written.append(pose_path)
        truth_path = out_dir / f"{name}_truth.json"
        write_sidecar(gen_pose, truth_path)
        written.append(truth_path)
    if args.kind in ("metrics", "both"):
        gen_angles = generate_angle_series(spec)
        metrics_path = out_dir / f"{name}_metrics.csv"
        write_metrics_csv(metrics_rows_from_angles(gen_angles), metrics_path)
        written.append(metrics_path)
        if args.kind == "metrics":
            truth_path = out_dir / f"{name}_truth.json"
            write_sidecar(gen_angles, truth_path)
            written.append(truth_path)

    for path in written:
        print(path)
    return EXIT_OK


def _cmd_trim(args) -> int:
    report = read_report(args.report)
    for command in emit_trim_commands(
        report, args.video, margin_s=args.margin_seconds, fps=args.fps
    ):
        print(command)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EmptySeriesError, InsufficientDataError) as exc:
        print(f"kneeflex: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (
        SchemaError,
        MissingLandmarkError,
        DegenerateGeometryError,
        ConstructionError,
        OSError,
    ) as exc:
        print(f"kneeflex: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"kneeflex: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
