"""Binary edit-fidelity predicates per MEO.

Each test depends only on FK-derived joint positions/angles of the source and
edited clips. Translations pass when the joint moved at least half the
requested magnitude along the requested direction at the resolved frame;
rotations when the joint angle changed at least half the magnitude about the
verb axis with the correct sign; relative translations when the ordering
predicate holds. Entire-motion rotations are evaluated at the middle frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import quat
from ..keyframe.apply import (
    DEFAULT_RELATIVE_OFFSET_M, DEFAULT_ROTATION_DEG, DEFAULT_TRANSLATION_M,
    direction_vector,
)
from ..keyframe.resolve import resolve_frame
from ..keyframe.verbs import rotation_axis
from ..lang.ast import MEO, Rotate, Translate
from ..lang.printer import print_meo
from ..lang.ast import MEOProgram
from ..motion import MotionClip, forward_kinematics

ACHIEVEMENT_FRACTION = 0.5


@dataclass(frozen=True)
class FidelityTest:
    meo: MEO
    description: str

    def evaluate(self, clip_source: MotionClip, clip_edited: MotionClip) -> bool:
        rf = resolve_frame(clip_source, self.meo.frame)
        fi = rf.frame_index if not rf.entire else (len(clip_source) - 1) // 2
        c = self.meo.constraint
        joint = c.joint.value
        if isinstance(c.kind, Rotate):
            axis = rotation_axis(c.joint, c.kind.verb)
            if axis is None:
                raise ValueError(f"no fidelity test: verb inapplicable for {joint}")
            magnitude = math.radians(c.kind.magnitude_deg or DEFAULT_ROTATION_DEG)
            qs = clip_source.frames[fi].joint_rotations[joint]
            qe = clip_edited.frames[fi].joint_rotations[joint]
            delta = quat.multiply(qe, quat.conjugate(qs))
            u = axis / np.linalg.norm(axis)
            angle = 2.0 * math.atan2(float(np.dot(delta[1:], u)), float(delta[0]))
            return angle >= ACHIEVEMENT_FRACTION * magnitude
        assert isinstance(c.kind, Translate)
        pose_s = clip_source.frames[fi]
        pos_s = forward_kinematics(clip_source, fi)
        pos_e = forward_kinematics(clip_edited, fi)
        d = direction_vector(pose_s, pos_s, joint, c.kind.direction)
        if c.kind.relative_to is not None:
            rel = c.kind.relative_to.value
            return float(np.dot(pos_e[joint] - pos_e[rel], d)) > 0.0
        magnitude = c.kind.magnitude_m or DEFAULT_TRANSLATION_M
        moved = float(np.dot(pos_e[joint] - pos_s[joint], d))
        return moved >= ACHIEVEMENT_FRACTION * magnitude


def fidelity_test_for(meo: MEO) -> FidelityTest:
    return FidelityTest(meo, print_meo(MEOProgram((meo,))))


def fidelity_auto(pairs) -> float:
    """Mean pass rate over (meo_or_program, clip_source, clip_edited) items."""
    results = []
    for program, clip_source, clip_edited in pairs:
        ops = program.ops if isinstance(program, MEOProgram) else (program,)
        for meo in ops:
            results.append(fidelity_test_for(meo).evaluate(clip_source, clip_edited))
    if not results:
        raise ValueError("no fidelity tests to run")
    return sum(results) / len(results)
