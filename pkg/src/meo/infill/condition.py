"""Conditioning assembly for the infilling models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import quat
from ..motion import MotionClip, RootTrajectory
from .spline import _check_keyframes
from .tensorize import FeatureLayout, clip_to_tensor, layout_for, pose_to_features


@dataclass(frozen=True)
class InfillCondition:
    clip_source: MotionClip
    keyframes: tuple
    w: int
    layout: FeatureLayout
    values: np.ndarray  # (N, D): conditioned entries hold their target values
    mask: np.ndarray  # (N, D) binary; 1 = conditioned, 0 = infill
    root_trajectory: Optional[RootTrajectory] = None

    @property
    def n_frames(self) -> int:
        return len(self.clip_source)

    def frame_conditioned(self, i: int) -> bool:
        return bool(self.mask[i].all())


def build_condition(clip_source: MotionClip, keyframes, w: int,
                    root_trajectory: RootTrajectory | None = None) -> InfillCondition:
    n = len(clip_source)
    _check_keyframes(n, keyframes, w)
    layout = layout_for(clip_source.skeleton)
    values = np.zeros((n, layout.dim))
    mask = np.zeros((n, layout.dim))
    source = clip_to_tensor(clip_source, layout)
    for i in list(range(w)) + list(range(n - w, n)):
        values[i] = source[i]
        mask[i] = 1.0
    for kf in keyframes:
        values[kf.frame_index] = pose_to_features(kf.pose, layout)
        mask[kf.frame_index] = 1.0
    if root_trajectory is not None:
        if len(root_trajectory) != n:
            raise ValueError("root trajectory length does not match clip")
        rs = layout.group_slice("root")
        for i in range(n):
            if mask[i, rs].all():
                continue
            yaw = quat.yaw_angle(root_trajectory.yaw_rotations[i])
            values[i, 0:3] = root_trajectory.translations[i]
            values[i, 3] = np.sin(yaw)
            values[i, 4] = np.cos(yaw)
            mask[i, rs] = 1.0
    return InfillCondition(clip_source, tuple(sorted(keyframes, key=lambda k: k.frame_index)),
                           w, layout, values, mask, root_trajectory)
