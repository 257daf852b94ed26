"""Motion clip representation and forward kinematics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import quat
from .skeleton import ROOT_NAME, Skeleton

QUAT_NORM_TOL = 1e-6


class MotionError(ValueError):
    pass


@dataclass(frozen=True)
class Pose:
    root_translation: np.ndarray
    joint_rotations: dict  # joint name -> unit quaternion [w,x,y,z]

    def __post_init__(self):
        t = np.asarray(self.root_translation, dtype=float)
        if t.shape != (3,) or not np.all(np.isfinite(t)):
            raise MotionError("root_translation must be a finite 3-vector")
        t.flags.writeable = False
        rots = {}
        for name, q in self.joint_rotations.items():
            q = np.asarray(q, dtype=float)
            if q.shape != (4,) or not np.all(np.isfinite(q)):
                raise MotionError(f"joint {name}: rotation must be a finite quaternion")
            n = np.linalg.norm(q)
            if abs(n - 1.0) > QUAT_NORM_TOL:
                raise MotionError(
                    f"joint {name}: quaternion norm {n:.9f} deviates beyond {QUAT_NORM_TOL}")
            q.flags.writeable = False
            rots[name] = q
        object.__setattr__(self, "root_translation", t)
        object.__setattr__(self, "joint_rotations", rots)

    def with_rotation(self, joint: str, q: np.ndarray) -> "Pose":
        rots = dict(self.joint_rotations)
        rots[joint] = q
        return Pose(self.root_translation, rots)

    def with_root(self, t: np.ndarray) -> "Pose":
        return Pose(t, self.joint_rotations)

    def allclose(self, other: "Pose", atol: float = 1e-9) -> bool:
        if set(self.joint_rotations) != set(other.joint_rotations):
            return False
        if not np.allclose(self.root_translation, other.root_translation, atol=atol):
            return False
        for name, q in self.joint_rotations.items():
            p = other.joint_rotations[name]
            if not (np.allclose(q, p, atol=atol) or np.allclose(q, -p, atol=atol)):
                return False
        return True


def rest_pose(skeleton: Skeleton) -> Pose:
    return Pose(np.zeros(3), {j.name: quat.IDENTITY.copy() for j in skeleton.joints})


@dataclass(frozen=True)
class MotionClip:
    skeleton: Skeleton
    frames: tuple
    fps: int = 24

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise MotionError("clip must have at least one frame")
        if not (isinstance(self.fps, int) and self.fps > 0):
            raise MotionError("fps must be a positive integer")
        names = set(self.skeleton.joint_names)
        for i, pose in enumerate(frames):
            if set(pose.joint_rotations) != names:
                raise MotionError(f"frame {i}: rotations do not cover the skeleton joints")
        object.__setattr__(self, "frames", frames)

    def __len__(self) -> int:
        return len(self.frames)

    def with_frame(self, index: int, pose: Pose) -> "MotionClip":
        frames = list(self.frames)
        frames[index] = pose
        return MotionClip(self.skeleton, tuple(frames), self.fps)

    def allclose(self, other: "MotionClip", atol: float = 1e-9) -> bool:
        return (len(self) == len(other)
                and all(a.allclose(b, atol) for a, b in zip(self.frames, other.frames)))


def forward_kinematics(clip: MotionClip, frame_index: int) -> dict:
    """World position of every joint at one frame."""
    if not 0 <= frame_index < len(clip):
        raise IndexError(f"frame {frame_index} out of range 0..{len(clip) - 1}")
    return fk_pose(clip.skeleton, clip.frames[frame_index])


def fk_pose(skeleton: Skeleton, pose: Pose) -> dict:
    positions: dict = {}
    world_rot: dict = {}
    for j in skeleton.joints:
        q = pose.joint_rotations[j.name]
        if j.parent is None:
            positions[j.name] = pose.root_translation.copy()
            world_rot[j.name] = q
        else:
            pr = world_rot[j.parent]
            positions[j.name] = positions[j.parent] + quat.rotate_vec(pr, j.offset)
            world_rot[j.name] = quat.multiply(pr, q)
    return positions


def fk_world_rotations(skeleton: Skeleton, pose: Pose) -> dict:
    world_rot: dict = {}
    for j in skeleton.joints:
        q = pose.joint_rotations[j.name]
        world_rot[j.name] = q if j.parent is None else quat.multiply(world_rot[j.parent], q)
    return world_rot


def _multiply_frames(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # per-frame version of quat.multiply, (N, 4) x (N, 4) -> (N, 4)
    aw, ax, ay, az = a[:, 0], a[:, 1], a[:, 2], a[:, 3]
    bw, bx, by, bz = b[:, 0], b[:, 1], b[:, 2], b[:, 3]
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=1)


def _rotate_vec_frames(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    # per-frame version of quat.rotate_vec, (N, 4) x (3,) -> (N, 3)
    w = q[:, :1]
    u = q[:, 1:]
    return v + 2.0 * np.cross(u, np.cross(u, np.broadcast_to(v, u.shape)) + w * v)


def joint_trajectory(clip: MotionClip, joint: str) -> np.ndarray:
    """World positions of one joint over all frames, shape (N, 3).

    Walks only the root-to-joint chain, with all frames batched; the result is
    bit-identical to per-frame forward_kinematics.
    """
    by_name = {j.name: j for j in clip.skeleton.joints}
    if joint not in by_name:
        raise KeyError(f"unknown joint {joint!r}")
    chain = []
    node = by_name[joint]
    while node is not None:
        chain.append(node)
        node = by_name[node.parent] if node.parent is not None else None
    chain.reverse()

    positions = np.array([p.root_translation for p in clip.frames])
    world_rot = np.array([p.joint_rotations[chain[0].name] for p in clip.frames])
    for node in chain[1:]:
        positions = positions + _rotate_vec_frames(world_rot, node.offset)
        world_rot = _multiply_frames(
            world_rot, np.array([p.joint_rotations[node.name] for p in clip.frames]))
    return positions


@dataclass(frozen=True)
class RootTrajectory:
    translations: tuple  # per-frame 3-vectors
    yaw_rotations: tuple  # per-frame unit quaternions about +y

    def __post_init__(self):
        ts = tuple(np.asarray(t, dtype=float) for t in self.translations)
        qs = tuple(np.asarray(q, dtype=float) for q in self.yaw_rotations)
        if len(ts) != len(qs):
            raise MotionError("trajectory translations/rotations length mismatch")
        for q in qs:
            if abs(np.linalg.norm(q) - 1.0) > QUAT_NORM_TOL:
                raise MotionError("trajectory yaw quaternion not unit-norm")
        object.__setattr__(self, "translations", ts)
        object.__setattr__(self, "yaw_rotations", qs)

    def __len__(self) -> int:
        return len(self.translations)


def extract_root_trajectory(clip: MotionClip) -> RootTrajectory:
    ts, qs = [], []
    for pose in clip.frames:
        ts.append(pose.root_translation)
        qs.append(quat.yaw_twist(pose.joint_rotations[ROOT_NAME]))
    return RootTrajectory(tuple(ts), tuple(qs))


def compose_root_trajectory(clip: MotionClip, trajectory: RootTrajectory) -> MotionClip:
    """Re-impose a root trajectory on a clip's body motion.

    Frames whose trajectory entry is bitwise-equal to the clip's own are passed
    through untouched, making extract/compose a lossless round trip.
    """
    if len(trajectory) != len(clip):
        raise MotionError("trajectory length does not match clip")
    frames = []
    for pose, t, yaw in zip(clip.frames, trajectory.translations, trajectory.yaw_rotations):
        old_yaw = quat.yaw_twist(pose.joint_rotations[ROOT_NAME])
        same_t = np.array_equal(t, pose.root_translation)
        same_y = np.array_equal(yaw, old_yaw)
        if same_t and same_y:
            frames.append(pose)
            continue
        new_pose = pose
        if not same_t:
            new_pose = new_pose.with_root(t)
        if not same_y:
            delta = quat.multiply(yaw, quat.conjugate(old_yaw))
            new_rot = quat.normalize(quat.multiply(delta, pose.joint_rotations[ROOT_NAME]))
            new_pose = new_pose.with_rotation(ROOT_NAME, new_rot)
        frames.append(new_pose)
    return MotionClip(clip.skeleton, tuple(frames), clip.fps)
