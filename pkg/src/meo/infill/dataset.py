"""Procedural synthetic training corpus: squats, kicks, jumps, arm raises.

Seeded parameterized sinusoid/keyframe families; the generator is the
committed artifact, not the data.
"""

from __future__ import annotations

import math

import numpy as np

from .. import quat
from ..motion import MotionClip, Pose, rest_pose
from ..skeleton import Skeleton, default_skeleton

KINDS = ("squat", "kick", "jump", "arm_raise")
AXES = {"x": np.array([1.0, 0, 0]), "y": np.array([0, 1.0, 0]), "z": np.array([0, 0, 1.0])}


def _pose(skeleton: Skeleton, root_t, angles: dict) -> Pose:
    rots = {}
    for j in skeleton.joints:
        if j.name in angles:
            axis, ang = angles[j.name]
            rots[j.name] = quat.from_axis_angle(AXES[axis], ang)
        else:
            rots[j.name] = quat.IDENTITY.copy()
    return Pose(np.asarray(root_t, dtype=float), rots)


def _bump(phase: float) -> float:
    # smooth 0 -> 1 -> 0 over [0, 1]
    return math.sin(math.pi * min(max(phase, 0.0), 1.0)) ** 2


def generate_clip(kind: str, rng: np.random.Generator,
                  skeleton: Skeleton | None = None, n_frames: int = 60,
                  fps: int = 24) -> MotionClip:
    skeleton = skeleton or default_skeleton()
    if kind not in KINDS:
        raise ValueError(f"unknown motion kind {kind!r}")
    amp = float(rng.uniform(0.6, 1.3))
    center = float(rng.uniform(0.4, 0.6))
    width = float(rng.uniform(0.5, 0.9))
    base_y = float(rng.uniform(0.95, 1.05))
    drift = float(rng.uniform(-0.003, 0.003))
    frames = []
    for i in range(n_frames):
        u = i / (n_frames - 1)
        phase = (u - (center - width / 2)) / width
        b = _bump(phase)
        root = [drift * i, base_y, 0.0]
        angles: dict = {}
        if kind == "squat":
            depth = 0.28 * amp
            root[1] = base_y - depth * b
            angles["right_knee"] = ("x", 1.4 * amp * b)
            angles["left_knee"] = ("x", 1.4 * amp * b)
            angles["right_hip"] = ("x", -0.9 * amp * b)
            angles["left_hip"] = ("x", -0.9 * amp * b)
            angles["waist"] = ("x", 0.25 * amp * b)
        elif kind == "kick":
            angles["right_hip"] = ("x", -1.5 * amp * b)
            angles["right_knee"] = ("x", 0.9 * amp * (1.0 - b) * b * 4)
            angles["left_hip"] = ("x", 0.15 * amp * b)
            angles["waist"] = ("x", -0.15 * amp * b)
        elif kind == "jump":
            height = 0.30 * amp
            root[1] = base_y + height * b
            crouch = _bump(phase - 0.45)
            angles["right_knee"] = ("x", 0.9 * amp * crouch)
            angles["left_knee"] = ("x", 0.9 * amp * crouch)
            angles["right_shoulder"] = ("y", -1.0 * amp * b)
            angles["left_shoulder"] = ("y", 1.0 * amp * b)
        else:  # arm_raise
            angles["right_shoulder"] = ("z", -1.2 * amp * b)
            angles["left_shoulder"] = ("z", 1.2 * amp * b)
            angles["right_elbow"] = ("y", 0.3 * amp * b)
            angles["left_elbow"] = ("y", -0.3 * amp * b)
        frames.append(_pose(skeleton, root, angles))
    return MotionClip(skeleton, tuple(frames), fps)


def generate_corpus(n_clips: int, seed: int,
                    skeleton: Skeleton | None = None) -> list:
    rng = np.random.default_rng(seed)
    skeleton = skeleton or default_skeleton()
    return [generate_clip(KINDS[i % len(KINDS)], rng, skeleton)
            for i in range(n_clips)]


def squat_fixture(min_frame: int = 30, n_frames: int = 60) -> MotionClip:
    """Deterministic squat whose waist height is lowest at `min_frame`."""
    skeleton = default_skeleton()
    frames = []
    for i in range(n_frames):
        span = min_frame if i <= min_frame else (n_frames - 1 - min_frame)
        b = math.cos(math.pi / 2 * (i - min_frame) / span) ** 2 if span else 1.0
        root = [0.0, 1.0 - 0.3 * b, 0.0]
        angles = {
            "right_knee": ("x", 1.4 * b), "left_knee": ("x", 1.4 * b),
            "right_hip": ("x", -0.9 * b), "left_hip": ("x", -0.9 * b),
        }
        frames.append(_pose(skeleton, root, angles))
    return MotionClip(skeleton, tuple(frames), 24)
