"""Damped-least-squares inverse kinematics over fixed per-effector chains."""

from __future__ import annotations

import numpy as np

from .. import quat
from ..motion import Pose, fk_pose, fk_world_rotations
from ..skeleton import Skeleton

DAMPING = 0.1
MAX_ITERATIONS = 200
POSITION_TOL = 1e-3
MAX_STEP_RAD = 0.5

_CHAINS = {
    "right_hand": ("right_clavicle", "right_shoulder", "right_elbow"),
    "left_hand": ("left_clavicle", "left_shoulder", "left_elbow"),
    "right_elbow": ("right_shoulder",),
    "left_elbow": ("left_shoulder",),
    "right_foot": ("right_hip", "right_knee"),
    "left_foot": ("left_hip", "left_knee"),
    "right_knee": ("right_hip",),
    "left_knee": ("left_hip",),
    "right_shoulder": ("right_clavicle",),
    "left_shoulder": ("left_clavicle",),
    "right_hip": ("waist",),
    "left_hip": ("waist",),
    "head": ("spine", "chest", "neck"),
}


def chain_for(joint: str) -> tuple:
    try:
        return _CHAINS[joint]
    except KeyError:
        raise ValueError(f"no IK chain defined for joint {joint!r}") from None


def _exp_quat(omega: np.ndarray) -> np.ndarray:
    angle = np.linalg.norm(omega)
    if angle < 1e-12:
        return quat.IDENTITY.copy()
    return quat.from_axis_angle(omega, angle)


def solve_chain(skeleton: Skeleton, pose: Pose, chain: tuple, effector: str,
                target: np.ndarray, damping: float = DAMPING,
                max_iterations: int = MAX_ITERATIONS,
                tol: float = POSITION_TOL) -> tuple:
    """Move `effector` to `target` by rotating the chain joints.

    Returns (pose, residual_m, iterations). Best-effort on unreachable targets.
    """
    rotations = dict(pose.joint_rotations)
    n = len(chain)
    residual = np.inf
    it = 0
    for it in range(1, max_iterations + 1):
        work = Pose(pose.root_translation, rotations)
        positions = fk_pose(skeleton, work)
        error = target - positions[effector]
        residual = float(np.linalg.norm(error))
        if residual <= tol:
            return work, residual, it
        jac = np.zeros((3, 3 * n))
        for k, jname in enumerate(chain):
            arm = positions[effector] - positions[jname]
            for a in range(3):
                axis = np.zeros(3)
                axis[a] = 1.0
                jac[:, 3 * k + a] = np.cross(axis, arm)
        lam = max(0.02, min(damping, residual))
        delta = jac.T @ np.linalg.solve(jac @ jac.T + lam * lam * np.eye(3), error)
        world = fk_world_rotations(skeleton, work)
        for k, jname in enumerate(chain):
            omega = delta[3 * k: 3 * k + 3]
            step = np.linalg.norm(omega)
            if step > MAX_STEP_RAD:
                omega = omega * (MAX_STEP_RAD / step)
            spec = skeleton.joint(jname)
            if spec.parent is None:
                new_world = quat.multiply(_exp_quat(omega), world[jname])
                rotations[jname] = quat.normalize(new_world)
            else:
                parent_world = world[spec.parent]
                new_world = quat.multiply(_exp_quat(omega), world[jname])
                local = quat.multiply(quat.conjugate(parent_world), new_world)
                rotations[jname] = quat.normalize(local)
    work = Pose(pose.root_translation, rotations)
    residual = float(np.linalg.norm(target - fk_pose(skeleton, work)[effector]))
    return work, residual, it
