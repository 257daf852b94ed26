"""Spline baseline infilling (the deterministic interpolation engine)."""

from __future__ import annotations

import numpy as np

from .. import quat
from ..motion import MotionClip, Pose


class SplineError(ValueError):
    pass


class HermiteSpline:
    """Piecewise cubic Hermite through (knot time, value) with given tangents.

    Values are vectors; tangents are in value-units per frame. Evaluation and
    the analytic derivative are exact at knots.
    """

    def __init__(self, times: np.ndarray, values: np.ndarray, tangents: np.ndarray):
        times = np.asarray(times, dtype=float)
        if len(times) < 2 or np.any(np.diff(times) <= 0):
            raise SplineError("knot times must be strictly increasing, >= 2 knots")
        self.times = times
        self.values = np.asarray(values, dtype=float)
        self.tangents = np.asarray(tangents, dtype=float)

    def _segment(self, t: float) -> int:
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        return min(max(k, 0), len(self.times) - 2)

    def value(self, t: float) -> np.ndarray:
        k = self._segment(t)
        t0, t1 = self.times[k], self.times[k + 1]
        h = t1 - t0
        s = (t - t0) / h
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        return (h00 * self.values[k] + h10 * h * self.tangents[k]
                + h01 * self.values[k + 1] + h11 * h * self.tangents[k + 1])

    def derivative(self, t: float) -> np.ndarray:
        k = self._segment(t)
        t0, t1 = self.times[k], self.times[k + 1]
        h = t1 - t0
        s = (t - t0) / h
        d00 = (6 * s**2 - 6 * s) / h
        d10 = (3 * s**2 - 4 * s + 1)
        d01 = (-6 * s**2 + 6 * s) / h
        d11 = (3 * s**2 - 2 * s)
        return (d00 * self.values[k] + d10 * self.tangents[k]
                + d01 * self.values[k + 1] + d11 * self.tangents[k + 1])


def _check_keyframes(n: int, keyframes, w: int):
    if w < 1:
        raise SplineError("context width W must be >= 1")
    if 2 * w + len(keyframes) >= n:
        raise SplineError("clip too short for context width and keyframes")
    seen = set()
    for kf in keyframes:
        if not w - 1 < kf.frame_index < n - w:
            raise SplineError(
                f"keyframe {kf.frame_index} inside context window (W={w}, N={n})")
        if kf.frame_index in seen:
            raise SplineError(f"duplicate keyframe at frame {kf.frame_index}")
        seen.add(kf.frame_index)


def knot_indices(n: int, keyframes, w: int) -> list:
    return [w - 1] + sorted(kf.frame_index for kf in keyframes) + [n - w]


def root_spline(clip_source: MotionClip, keyframes, w: int) -> HermiteSpline:
    """Root-translation spline: source-velocity tangents at the context edges,
    Catmull-Rom tangents at interior keyframe knots."""
    n = len(clip_source)
    key_by_frame = {kf.frame_index: kf for kf in sorted(keyframes, key=lambda k: k.frame_index)}
    times = np.array(knot_indices(n, keyframes, w), dtype=float)
    roots = [p.root_translation for p in clip_source.frames]
    values = []
    for idx in times.astype(int):
        if idx in key_by_frame:
            values.append(key_by_frame[idx].pose.root_translation)
        else:
            values.append(roots[idx])
    values = np.array(values)

    tangents = np.zeros_like(values)
    # boundary tangents match the source's per-frame velocity at the context edges
    i0 = w - 1
    tangents[0] = roots[i0] - roots[i0 - 1] if i0 > 0 else roots[1] - roots[0]
    i1 = n - w
    tangents[-1] = roots[i1 + 1] - roots[i1] if i1 + 1 < n else roots[i1] - roots[i1 - 1]
    for k in range(1, len(times) - 1):
        tangents[k] = (values[k + 1] - values[k - 1]) / (times[k + 1] - times[k - 1])
    return HermiteSpline(times, values, tangents)


def spline_infill(clip_source: MotionClip, keyframes, w: int) -> MotionClip:
    """Catmull-Rom root interpolation plus per-joint slerp between knot poses.

    Context frames and keyframes pass through bitwise; everything in between
    is interpolated.
    """
    n = len(clip_source)
    _check_keyframes(n, keyframes, w)
    key_by_frame = {kf.frame_index: kf for kf in keyframes}
    knots = knot_indices(n, keyframes, w)
    spline = root_spline(clip_source, keyframes, w)

    def knot_pose(idx: int) -> Pose:
        return key_by_frame[idx].pose if idx in key_by_frame else clip_source.frames[idx]

    frames = list(clip_source.frames)
    for fi in key_by_frame:
        frames[fi] = key_by_frame[fi].pose
    for a, b in zip(knots[:-1], knots[1:]):
        pa, pb = knot_pose(a), knot_pose(b)
        for fi in range(a + 1, b):
            u = (fi - a) / (b - a)
            rots = {name: quat.slerp(pa.joint_rotations[name], pb.joint_rotations[name], u)
                    for name in clip_source.skeleton.joint_names}
            frames[fi] = Pose(spline.value(fi), rots)
    return MotionClip(clip_source.skeleton, tuple(frames), clip_source.fps)
