"""Report rendering: JSON summaries plus CSV tables and matplotlib figures.

Every CLI report path writes three kinds of artifacts into one directory:
``report.json`` (machine-readable summary), ``*.csv`` (delimited tables),
and ``*.png`` (figures).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .metrics.features import FEATURE_NAMES, geometric_features  # noqa: E402
from .motion import MotionClip, joint_trajectory  # noqa: E402


def _ensure_dir(out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list, rows: list) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_edit_report(out_dir, report: dict, clip_source: MotionClip,
                      clip_edited: MotionClip,
                      clip_spline: MotionClip | None = None) -> Path:
    """Artifacts for one executed edit: summary, frame table, trajectories."""
    out = _ensure_dir(out_dir)
    _write_json(out / "report.json", report)

    rows = [(rf["op"], rf["frame"], rf["source"], rf["entire"],
             rf["anchor_value"]) for rf in report.get("resolved_frames", ())]
    _write_csv(out / "resolved_frames.csv",
               ["op", "frame", "source", "entire", "anchor_value"], rows)

    joints = report.get("touched_joints") or ["waist"]
    fig, axes = plt.subplots(len(joints), 1, figsize=(8, 2.6 * len(joints)),
                             squeeze=False)
    for ax, joint in zip(axes[:, 0], joints):
        for clip, label, style in ((clip_source, "source", "k--"),
                                   (clip_spline, "spline", "c-"),
                                   (clip_edited, "edited", "b-")):
            if clip is None:
                continue
            heights = joint_trajectory(clip, joint)[:, 1]
            ax.plot(heights, style, label=label)
        for kf in report.get("keyframes", ()):
            ax.axvline(kf, color="r", alpha=0.4, linewidth=0.8)
        ax.set_ylabel(f"{joint} height (m)")
        ax.legend(loc="best", fontsize=8)
    axes[-1, 0].set_xlabel("frame")
    _save(fig, out / "trajectories.png")
    return out


def write_training_report(out_dir, losses, baseline_loss: float | None = None,
                          extra: dict | None = None) -> Path:
    """Loss curve figure plus per-step CSV and a JSON summary."""
    out = _ensure_dir(out_dir)
    losses = [float(x) for x in losses]
    _write_csv(out / "losses.csv", ["step", "loss"],
               list(enumerate(losses, start=1)))
    summary = {"steps": len(losses),
               "final_loss": losses[-1] if losses else None,
               "min_loss": min(losses) if losses else None}
    if baseline_loss is not None:
        summary["baseline_loss"] = float(baseline_loss)
    summary.update(extra or {})
    _write_json(out / "report.json", summary)

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(range(1, len(losses) + 1), losses, "b-", linewidth=0.8,
            label="training loss")
    if len(losses) >= 20:
        k = max(1, len(losses) // 50)
        smooth = np.convolve(losses, np.ones(k) / k, mode="valid")
        ax.plot(range(k, len(losses) + 1), smooth, "r-", label="smoothed")
    if baseline_loss is not None:
        ax.axhline(baseline_loss, color="g", linestyle="--",
                   label="context-mean baseline")
    ax.set_xlabel("step")
    ax.set_ylabel("loss")
    ax.set_yscale("log")
    ax.legend(loc="best")
    _save(fig, out / "loss_curve.png")
    return out


def write_eval_report(out_dir, report: dict, clips_source=(),
                      clips_edited=()) -> Path:
    """Evaluation artifacts: summary, per-item CSV, metric figures."""
    out = _ensure_dir(out_dir)
    _write_json(out / "report.json", report)

    per_item = report.get("per_item", [])
    _write_csv(out / "per_item.csv", ["item", "g_mpjpe", "fidelity"],
               [(it["item"], it["g_mpjpe"], it["fidelity"])
                for it in per_item])

    if per_item:
        names = [it["item"] for it in per_item]
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 4))
        ax1.bar(range(len(names)), [it["g_mpjpe"] for it in per_item],
                color="steelblue")
        ax1.set_xticks(range(len(names)))
        ax1.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
        ax1.set_ylabel("G-MPJPE (m)")
        passes = [1.0 if it["fidelity"] else 0.0 for it in per_item]
        ax2.bar(range(len(names)), passes, color="seagreen")
        ax2.set_xticks(range(len(names)))
        ax2.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
        ax2.set_ylabel("fidelity test passed")
        ax2.set_ylim(0, 1.1)
        _save(fig, out / "per_item.png")

    if len(clips_source) >= 1 and len(clips_edited) >= 1:
        fa = np.stack([geometric_features(c) for c in clips_source])
        fb = np.stack([geometric_features(c) for c in clips_edited])
        x = np.arange(len(FEATURE_NAMES))
        fig, ax = plt.subplots(figsize=(10, 4))
        width = 0.4
        ax.bar(x - width / 2, fa.mean(axis=0), width, label="source")
        ax.bar(x + width / 2, fb.mean(axis=0), width, label="edited")
        ax.set_xticks(x)
        ax.set_xticklabels(FEATURE_NAMES, rotation=60, ha="right", fontsize=7)
        ax.set_ylabel("feature mean")
        ax.legend(loc="best")
        _save(fig, out / "feature_means.png")
    return out
