"""Anatomical verb-to-axis table.

Maps (joint, rotation verb) to a signed rotation axis in the joint's
local (rest) frame, or None where the verb makes no anatomical sense
(e.g. abducting a hand). Left-side axes are mirrored from the right side
across the sagittal plane; rotation axes mirror as pseudovectors,
(x, y, z) -> (x, -y, -z).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..lang.ast import JointName, RotationVerb

_X = (1.0, 0.0, 0.0)
_Y = (0.0, 1.0, 0.0)
_Z = (0.0, 0.0, 1.0)


def _neg(a):
    return (-a[0], -a[1], -a[2])


def _mirror(a):
    # pseudovector reflection across the x=0 plane
    return (a[0], -a[1], -a[2])


# right-side and midline entries; left side derived by mirroring
_RIGHT = {
    ("right_shoulder", "flex"): _Y,
    ("right_shoulder", "extend"): _neg(_Y),
    ("right_shoulder", "abduct"): _neg(_Z),
    ("right_shoulder", "adduct"): _Z,
    ("right_elbow", "flex"): _Y,
    ("right_elbow", "extend"): _neg(_Y),
    ("right_hand", "flex"): _Y,
    ("right_hand", "extend"): _neg(_Y),
    ("right_hip", "flex"): _neg(_X),
    ("right_hip", "extend"): _X,
    ("right_hip", "abduct"): _neg(_Z),
    ("right_hip", "adduct"): _Z,
    ("right_knee", "flex"): _X,
    ("right_knee", "extend"): _neg(_X),
    ("right_foot", "flex"): _neg(_X),
    ("right_foot", "extend"): _X,
    ("waist", "flex"): _X,
    ("waist", "extend"): _neg(_X),
    ("head", "flex"): _X,
    ("head", "extend"): _neg(_X),
}


@lru_cache(maxsize=1)
def verb_axis_table() -> dict:
    """Total map over all editable joints x verbs; value None means inapplicable."""
    table: dict = {}
    for joint in JointName:
        for verb in RotationVerb:
            table[(joint, verb)] = None
    for (jname, vname), axis in _RIGHT.items():
        table[(JointName(jname), RotationVerb(vname))] = np.array(axis)
        if jname.startswith("right_"):
            left = JointName(jname.replace("right_", "left_", 1))
            table[(left, RotationVerb(vname))] = np.array(_mirror(axis))
    return table


def rotation_axis(joint: JointName, verb: RotationVerb):
    return verb_axis_table()[(joint, verb)]
