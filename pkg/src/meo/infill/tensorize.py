"""Flattened motion feature layout.

Per frame: [root translation (3), root yaw as sin/cos (2),
per-joint rotation in 6D two-column form (6 per joint, skeleton order)].
Attribute groups for masking: "root" (the first 5 dims) plus one group
per joint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import quat
from ..motion import MotionClip, Pose
from ..skeleton import Skeleton

ROOT_GROUP = "root"
ROOT_DIM = 5
JOINT_DIM = 6


@dataclass(frozen=True)
class FeatureLayout:
    joint_names: tuple

    @property
    def dim(self) -> int:
        return ROOT_DIM + JOINT_DIM * len(self.joint_names)

    @property
    def groups(self) -> tuple:
        return (ROOT_GROUP,) + self.joint_names

    def group_slice(self, group: str) -> slice:
        if group == ROOT_GROUP:
            return slice(0, ROOT_DIM)
        i = self.joint_names.index(group)
        return slice(ROOT_DIM + JOINT_DIM * i, ROOT_DIM + JOINT_DIM * (i + 1))


def layout_for(skeleton: Skeleton) -> FeatureLayout:
    return FeatureLayout(tuple(skeleton.joint_names))


def _quat_to_6d(q: np.ndarray) -> np.ndarray:
    m = quat.to_matrix(q)
    return np.concatenate([m[:, 0], m[:, 1]])


def _6d_to_quat(v: np.ndarray) -> np.ndarray:
    a, b = v[:3], v[3:]
    na = np.linalg.norm(a)
    if na < 1e-8:
        a = np.array([1.0, 0.0, 0.0])
        na = 1.0
    c0 = a / na
    b = b - np.dot(c0, b) * c0
    nb = np.linalg.norm(b)
    if nb < 1e-8:
        b = np.array([0.0, 1.0, 0.0]) - c0[1] * c0
        nb = np.linalg.norm(b)
    c1 = b / nb
    c2 = np.cross(c0, c1)
    return quat.from_matrix(np.column_stack([c0, c1, c2]))


def pose_to_features(pose: Pose, layout: FeatureLayout) -> np.ndarray:
    out = np.empty(layout.dim)
    out[0:3] = pose.root_translation
    yaw = quat.yaw_angle(pose.joint_rotations[layout.joint_names[0]])
    out[3] = np.sin(yaw)
    out[4] = np.cos(yaw)
    for i, name in enumerate(layout.joint_names):
        out[ROOT_DIM + JOINT_DIM * i: ROOT_DIM + JOINT_DIM * (i + 1)] = \
            _quat_to_6d(pose.joint_rotations[name])
    return out


def features_to_pose(v: np.ndarray, layout: FeatureLayout) -> Pose:
    rots = {}
    for i, name in enumerate(layout.joint_names):
        rots[name] = _6d_to_quat(v[ROOT_DIM + JOINT_DIM * i: ROOT_DIM + JOINT_DIM * (i + 1)])
    return Pose(np.array(v[0:3]), rots)


def clip_to_tensor(clip: MotionClip, layout: FeatureLayout | None = None) -> np.ndarray:
    layout = layout or layout_for(clip.skeleton)
    return np.stack([pose_to_features(p, layout) for p in clip.frames])


def tensor_to_poses(x: np.ndarray, layout: FeatureLayout) -> list:
    return [features_to_pose(x[i], layout) for i in range(x.shape[0])]
