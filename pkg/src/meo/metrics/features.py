"""Geometric feature vector per clip: 12 documented statistics.

These are self-defined features for relative engine comparisons; no parity
with any external feature library is claimed.
"""

from __future__ import annotations

import numpy as np

from ..motion import MotionClip, joint_trajectory

FEATURE_NAMES = (
    "waist_height_mean",
    "waist_height_var",
    "head_height_mean",
    "right_hand_height_mean",
    "left_hand_height_mean",
    "right_foot_height_mean",
    "left_foot_height_mean",
    "hand_distance_mean",
    "foot_distance_mean",
    "hand_to_waist_distance_mean",
    "joint_speed_mean",
    "joint_speed_var",
)


def geometric_features(clip: MotionClip) -> np.ndarray:
    traj = {name: joint_trajectory(clip, name)
            for name in ("waist", "head", "right_hand", "left_hand",
                         "right_foot", "left_foot")}
    hand_dist = np.linalg.norm(traj["right_hand"] - traj["left_hand"], axis=1)
    foot_dist = np.linalg.norm(traj["right_foot"] - traj["left_foot"], axis=1)
    hand_waist = 0.5 * (np.linalg.norm(traj["right_hand"] - traj["waist"], axis=1)
                        + np.linalg.norm(traj["left_hand"] - traj["waist"], axis=1))
    stacked = np.stack(list(traj.values()))  # (J, N, 3)
    speed = np.linalg.norm(np.diff(stacked, axis=1), axis=2) * clip.fps
    v = np.array([
        traj["waist"][:, 1].mean(),
        traj["waist"][:, 1].var(),
        traj["head"][:, 1].mean(),
        traj["right_hand"][:, 1].mean(),
        traj["left_hand"][:, 1].mean(),
        traj["right_foot"][:, 1].mean(),
        traj["left_foot"][:, 1].mean(),
        hand_dist.mean(),
        foot_dist.mean(),
        hand_waist.mean(),
        speed.mean(),
        speed.var(),
    ])
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite feature value")
    return v
