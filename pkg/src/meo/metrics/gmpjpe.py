"""Global mean per-joint position error (no root alignment)."""

from __future__ import annotations

import numpy as np

from ..motion import MotionClip, forward_kinematics


def g_mpjpe(clip_a: MotionClip, clip_b: MotionClip) -> float:
    if clip_a.skeleton.joint_names != clip_b.skeleton.joint_names:
        raise ValueError("clips must share a skeleton")
    if len(clip_a) != len(clip_b):
        raise ValueError("clips must have the same frame count")
    names = clip_a.skeleton.joint_names
    total = 0.0
    for i in range(len(clip_a)):
        pa = forward_kinematics(clip_a, i)
        pb = forward_kinematics(clip_b, i)
        total += sum(float(np.linalg.norm(pa[n] - pb[n])) for n in names)
    return total / (len(clip_a) * len(names))
