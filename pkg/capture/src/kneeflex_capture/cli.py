"""Capture CLI: extract landmarks, render replays, or run the full loop."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import run_primary_analysis
from .config import AlignmentError, CaptureConfig
from .engines import EngineUnavailableError
from .extract import extract_landmarks
from .replay import render_augmented_replay


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kneeflex-capture",
        description="Extract pose landmarks from rehabilitation videos and "
        "render augmented replays.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="video -> pose CSV (needs mediapipe)")
    p.add_argument("--video", required=True)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--model-complexity", type=int, default=1, choices=[0, 1, 2])
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("replay", help="video + analysis outputs -> overlay video")
    p.add_argument("--video", required=True)
    p.add_argument("--pose-csv", required=True)
    p.add_argument("--metrics-csv", required=True)
    p.add_argument("--report", default=None, help="session report JSON for rep markers")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("pipeline", help="extract, analyze via kneeflex, then replay")
    p.add_argument("--video", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--view", choices=["sagittal", "frontal"], default="sagittal")
    p.add_argument("--side", choices=["left", "right"], default="right")
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--min-exercise-seconds", type=float, default=4.0)
    p.add_argument("--model-complexity", type=int, default=1, choices=[0, 1, 2])
    p.set_defaults(func=_cmd_pipeline)
    return parser


def _cmd_extract(args) -> int:
    config = CaptureConfig(
        video_path=args.video,
        output_csv_path=args.out_csv,
        model_complexity=args.model_complexity,
    )
    path = extract_landmarks(config)
    print(path)
    return 0


def _rep_frames_from_report(report_path) -> list[int]:
    if not report_path:
        return []
    import json

    report = json.loads(Path(report_path).read_text(encoding="utf-8"))
    return [int(rep["frame_index"]) for rep in report.get("reps", [])]


def _cmd_replay(args) -> int:
    config = CaptureConfig(
        video_path=args.video, output_csv_path=args.pose_csv, overlay_path=args.out
    )
    path = render_augmented_replay(
        args.video,
        args.metrics_csv,
        rep_frames=_rep_frames_from_report(args.report),
        config=config,
        out_path=args.out,
    )
    print(path)
    return 0


def _cmd_pipeline(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.video).stem
    config = CaptureConfig(
        video_path=args.video,
        output_csv_path=out_dir / f"{stem}.csv",
        model_complexity=args.model_complexity,
        overlay_path=out_dir / f"{stem}_replay.mp4",
    )
    pose_csv = extract_landmarks(config)
    analysis = run_primary_analysis(
        pose_csv,
        out_dir,
        view=args.view,
        side=args.side,
        fps=args.fps,
        min_exercise_seconds=args.min_exercise_seconds,
    )
    rep_frames = [int(rep["frame_index"]) for rep in analysis["report"]["reps"]]
    replay_path = render_augmented_replay(
        args.video,
        analysis["metrics_path"],
        rep_frames=rep_frames,
        config=config,
    )
    print(analysis["count"])
    print(replay_path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EngineUnavailableError as exc:
        print(f"kneeflex-capture: {exc}", file=sys.stderr)
        return 4
    except AlignmentError as exc:
        print(f"kneeflex-capture: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"kneeflex-capture: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
