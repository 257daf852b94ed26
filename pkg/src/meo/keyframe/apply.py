"""Applying joint constraints to resolved keyframes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import quat
from ..lang.ast import (
    JointName, MEOProgram, Rotate, RotationVerb, Translate, TranslationDir,
)
from ..motion import MotionClip, Pose, fk_pose
from ..skeleton import ROOT_NAME
from .ik import chain_for, solve_chain
from .resolve import ResolvedFrame, resolve_frame
from .verbs import rotation_axis

DEFAULT_ROTATION_DEG = 30.0
DEFAULT_TRANSLATION_M = 0.25
DEFAULT_RELATIVE_OFFSET_M = 0.10


class EditError(ValueError):
    pass


@dataclass(frozen=True)
class EditedKeyframe:
    frame_index: int
    pose: Pose
    touched_joints: frozenset
    warnings: tuple = ()


def direction_vector(pose: Pose, positions: dict, joint: str,
                     direction: TranslationDir) -> np.ndarray:
    """Resolve a direction word in the character-facing (yaw) frame."""
    yaw = quat.yaw_twist(pose.joint_rotations[ROOT_NAME])
    up = np.array([0.0, 1.0, 0.0])
    if direction is TranslationDir.UP:
        return up
    if direction is TranslationDir.DOWN:
        return -up
    forward = quat.rotate_vec(yaw, np.array([0.0, 0.0, 1.0]))
    if direction is TranslationDir.FORWARD:
        return forward
    if direction is TranslationDir.BACKWARD:
        return -forward
    # in/out: toward/away from the sagittal plane, on the joint's own side
    left = quat.rotate_vec(yaw, np.array([1.0, 0.0, 0.0]))
    side = float(np.dot(positions[joint] - pose.root_translation, left))
    sign = 1.0 if side >= 0 else -1.0
    out = sign * left
    return out if direction is TranslationDir.OUT else -out


def apply_rotation(clip: MotionClip, frame_index: int, joint: JointName,
                   verb: RotationVerb, magnitude_deg: float | None = None) -> EditedKeyframe:
    axis = rotation_axis(joint, verb)
    if axis is None:
        raise EditError(f"verb {verb.value!r} not applicable to {joint.value!r}")
    magnitude = DEFAULT_ROTATION_DEG if magnitude_deg is None else magnitude_deg
    pose = clip.frames[frame_index]
    delta = quat.from_axis_angle(axis, math.radians(magnitude))
    new_rot = quat.normalize(quat.multiply(delta, pose.joint_rotations[joint.value]))
    return EditedKeyframe(frame_index, pose.with_rotation(joint.value, new_rot),
                          frozenset({joint.value}))


def apply_translation(clip: MotionClip, frame_index: int, joint: JointName,
                      direction: TranslationDir, relative_to: JointName | None = None,
                      magnitude_m: float | None = None) -> EditedKeyframe:
    pose = clip.frames[frame_index]
    positions = fk_pose(clip.skeleton, pose)
    d = direction_vector(pose, positions, joint.value, direction)

    if joint is JointName.WAIST and relative_to is None:
        magnitude = DEFAULT_TRANSLATION_M if magnitude_m is None else magnitude_m
        new_root = pose.root_translation + magnitude * d
        return EditedKeyframe(frame_index, pose.with_root(new_root),
                              frozenset({ROOT_NAME}))

    if relative_to is not None:
        magnitude = DEFAULT_RELATIVE_OFFSET_M if magnitude_m is None else magnitude_m
        target = positions[relative_to.value] + magnitude * d
    else:
        magnitude = DEFAULT_TRANSLATION_M if magnitude_m is None else magnitude_m
        target = positions[joint.value] + magnitude * d

    chain = chain_for(joint.value)
    new_pose, residual, _ = solve_chain(clip.skeleton, pose, chain, joint.value, target)
    warnings = ()
    if residual > 1e-3:
        warnings = (f"unreachable, residual {residual:.4f} m",)
    return EditedKeyframe(frame_index, new_pose,
                          frozenset(chain) | {joint.value}, warnings)


def apply_constraint(clip: MotionClip, frame_index: int, meo) -> EditedKeyframe:
    c = meo.constraint
    if isinstance(c.kind, Rotate):
        return apply_rotation(clip, frame_index, c.joint, c.kind.verb, c.kind.magnitude_deg)
    assert isinstance(c.kind, Translate)
    return apply_translation(clip, frame_index, c.joint, c.kind.direction,
                             c.kind.relative_to, c.kind.magnitude_m)


@dataclass
class KeyframeExecution:
    base_clip: MotionClip  # source after entire-motion edits
    keyframes: list = field(default_factory=list)  # sorted by frame_index
    resolved: list = field(default_factory=list)  # (meo_index, ResolvedFrame)


def execute_meo_keyframes(clip: MotionClip, program: MEOProgram) -> KeyframeExecution:
    """Resolve and apply each MEO in order.

    Entire-motion MEOs are applied to every frame of the working clip and skip
    infilling; keyed MEOs that land on the same frame compose on one pose.
    """
    if not program.ops:
        raise EditError("empty program")
    working = clip
    edited: dict = {}  # frame_index -> (pose, touched, warnings)
    resolved_list = []
    for i, meo in enumerate(program.ops):
        rf = resolve_frame(working, meo.frame)
        resolved_list.append((i, rf))
        if rf.entire:
            frames = []
            touched: set = set()
            for fi in range(len(working)):
                kf = apply_constraint(working, fi, meo)
                frames.append(kf.pose)
                touched |= kf.touched_joints
            working = MotionClip(working.skeleton, tuple(frames), working.fps)
            # re-thread prior keyed edits through the new working clip
            for fi in list(edited):
                pose, tj, warns = edited[fi]
                edited[fi] = (pose, tj, warns)
            continue
        fi = rf.frame_index
        view = working if fi not in edited else working.with_frame(fi, edited[fi][0])
        kf = apply_constraint(view, fi, meo)
        prev = edited.get(fi)
        touched = kf.touched_joints | (prev[1] if prev else frozenset())
        warnings = kf.warnings + (prev[2] if prev else ())
        edited[fi] = (kf.pose, touched, warnings)
    keyframes = [EditedKeyframe(fi, pose, frozenset(tj), warns)
                 for fi, (pose, tj, warns) in sorted(edited.items())]
    return KeyframeExecution(working, keyframes, resolved_list)
