"""Root trajectory infilling: natural-cubic-spline regression by default."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .. import quat
from ..motion import MotionClip, RootTrajectory
from ..skeleton import ROOT_NAME
from .spline import _check_keyframes, knot_indices


class SplineTrajectoryInfiller:
    """Fits a natural cubic spline through every conditioned root value."""

    def infill(self, clip_source: MotionClip, keyframes, w: int) -> RootTrajectory:
        n = len(clip_source)
        _check_keyframes(n, keyframes, w)
        key_by_frame = {kf.frame_index: kf for kf in keyframes}
        cond = sorted(set(range(w)) | set(range(n - w, n)) | set(key_by_frame))

        def pose_at(idx):
            return key_by_frame[idx].pose if idx in key_by_frame else clip_source.frames[idx]

        xs = np.array(cond, dtype=float)
        trans = np.array([pose_at(i).root_translation for i in cond])
        yaws = np.unwrap([quat.yaw_angle(pose_at(i).joint_rotations[ROOT_NAME])
                          for i in cond])
        all_t = np.arange(n, dtype=float)
        out_trans = CubicSpline(xs, trans, bc_type="natural")(all_t)
        out_yaw = CubicSpline(xs, yaws, bc_type="natural")(all_t)
        # conditioned frames must pass through exactly, not via polynomial eval
        for i, idx in enumerate(cond):
            out_trans[idx] = trans[i]
            out_yaw[idx] = yaws[i]
        return RootTrajectory(
            tuple(out_trans[i] for i in range(n)),
            tuple(quat.from_yaw(out_yaw[i]) for i in range(n)),
        )


def trajectory_infill(clip_source: MotionClip, keyframes, w: int,
                      infiller=None) -> RootTrajectory:
    infiller = infiller or SplineTrajectoryInfiller()
    return infiller.infill(clip_source, keyframes, w)
