"""Bridge to the analysis package: run it as a subprocess, read its report.

This package does no angle or counting math of its own; all analysis
comes from the kneeflex CLI so there is exactly one implementation of
the numbers.
"""

from __future__ import annotations

import json
import shutil
import subprocess
import sys
from pathlib import Path


def _analysis_command() -> list[str]:
    executable = shutil.which("kneeflex")
    if executable:
        return [executable]
    return [sys.executable, "-m", "kneeflex.cli"]


def run_primary_analysis(pose_csv, out_dir, *, view="sagittal", side="right",
                         fps=30.0, min_exercise_seconds=4.0, extra_args=()) -> dict:
    """Invoke `kneeflex analyze` on an extracted pose CSV.

    Returns {"count", "report", "report_path", "metrics_path"}. Raises
    CalledProcessError with the CLI's stderr attached when it fails.
    """
    pose_csv = Path(pose_csv)
    out_dir = Path(out_dir)
    command = _analysis_command() + [
        "analyze",
        "--input", str(pose_csv),
        "--out-dir", str(out_dir),
        "--view", view,
        "--side", side,
        "--fps", str(fps),
        "--min-exercise-seconds", str(min_exercise_seconds),
        *extra_args,
    ]
    result = subprocess.run(command, capture_output=True, text=True)
    if result.returncode != 0:
        raise subprocess.CalledProcessError(
            result.returncode, command, output=result.stdout, stderr=result.stderr
        )
    stem = pose_csv.stem
    report_path = out_dir / f"{stem}_report.json"
    report = json.loads(report_path.read_text(encoding="utf-8"))
    return {
        "count": int(result.stdout.strip().splitlines()[-1]),
        "report": report,
        "report_path": report_path,
        "metrics_path": out_dir / f"{stem}_metrics.csv",
    }
