"""Frame-reference resolution against a concrete clip."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..lang.ast import (
    Explicit, ExplicitFrame, Extremum, FrameRef, Implicit, Index, TemporalRelation,
)
from ..motion import MotionClip, joint_trajectory

BEFORE_AFTER_DELTA = 6  # frames (0.25 s at 24 fps)
DEGENERATE_RANGE = 1e-9


class ExtremumUndefined(ValueError):
    pass


@dataclass(frozen=True)
class ResolvedFrame:
    frame_index: Optional[int]  # None iff entire is set
    source: str  # "explicit" | "extremum"
    anchor_value: Optional[float] = None
    entire: bool = False


def extremum_series(clip: MotionClip, joint: str, extremum: Extremum) -> np.ndarray:
    """Per-frame scalar whose argmax/argmin defines the extremum."""
    traj = joint_trajectory(clip, joint)
    if extremum in (Extremum.HIGHEST, Extremum.LOWEST):
        return traj[:, 1]
    roots = np.array([p.root_translation for p in clip.frames])
    d = traj - roots
    return np.hypot(d[:, 0], d[:, 2])


def resolve_frame(clip: MotionClip, frame_ref: FrameRef,
                  delta: int = BEFORE_AFTER_DELTA) -> ResolvedFrame:
    n = len(clip)
    if isinstance(frame_ref, Explicit):
        g = frame_ref.g
        if g is ExplicitFrame.START:
            return ResolvedFrame(0, "explicit")
        if g is ExplicitFrame.END:
            return ResolvedFrame(n - 1, "explicit")
        if g is ExplicitFrame.MIDDLE:
            return ResolvedFrame((n - 1) // 2, "explicit")
        return ResolvedFrame(None, "explicit", entire=True)
    if isinstance(frame_ref, Index):
        if frame_ref.frame >= n:
            raise IndexError(f"frame {frame_ref.frame} out of range 0..{n - 1}")
        return ResolvedFrame(frame_ref.frame, "explicit")

    assert isinstance(frame_ref, Implicit)
    series = extremum_series(clip, frame_ref.anchor_joint.value, frame_ref.extremum)
    if series.max() - series.min() < DEGENERATE_RANGE:
        raise ExtremumUndefined(
            f"extremum undefined: {frame_ref.anchor_joint.value} trajectory is constant")
    if frame_ref.extremum in (Extremum.HIGHEST, Extremum.FURTHEST):
        idx = int(np.argmax(series))
    else:
        idx = int(np.argmin(series))
    value = float(series[idx])
    if frame_ref.relation is TemporalRelation.BEFORE:
        idx = max(0, idx - delta)
    elif frame_ref.relation is TemporalRelation.AFTER:
        idx = min(n - 1, idx + delta)
    return ResolvedFrame(idx, "extremum", anchor_value=value)
