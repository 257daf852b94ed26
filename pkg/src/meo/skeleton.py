"""Skeleton definition: joint tree with rest-pose offsets.

The default humanoid has 19 joints: the 14 editable joints named by the
MEO vocabulary (right/left elbow, hip, knee, shoulder, hand, foot, plus
waist and head) and 5 structural joints (spine, chest, neck, two
clavicles). Units are meters; world up is +y, rest facing +z, T-pose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

ROOT_NAME = "waist"

EDITABLE_JOINTS = (
    "right_elbow", "left_elbow",
    "right_hip", "left_hip",
    "right_knee", "left_knee",
    "right_shoulder", "left_shoulder",
    "right_hand", "left_hand",
    "right_foot", "left_foot",
    "waist", "head",
)


class SkeletonError(ValueError):
    pass


@dataclass(frozen=True)
class JointSpec:
    name: str
    parent: Optional[str]
    offset: np.ndarray  # rest-pose offset from parent, meters

    def __post_init__(self):
        off = np.asarray(self.offset, dtype=float)
        if off.shape != (3,):
            raise SkeletonError(f"joint {self.name}: offset must be a 3-vector")
        if not np.all(np.isfinite(off)):
            raise SkeletonError(f"joint {self.name}: offset must be finite")
        off.flags.writeable = False
        object.__setattr__(self, "offset", off)


@dataclass(frozen=True)
class Skeleton:
    joints: tuple[JointSpec, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        joints = tuple(self.joints)
        object.__setattr__(self, "joints", joints)
        index = {j.name: i for i, j in enumerate(joints)}
        if len(index) != len(joints):
            raise SkeletonError("duplicate joint names")
        roots = [j for j in joints if j.parent is None]
        if len(roots) != 1:
            raise SkeletonError("skeleton must have exactly one root joint")
        if roots[0].name != ROOT_NAME:
            raise SkeletonError(f"root joint must be named {ROOT_NAME!r}")
        for j in joints:
            if j.parent is not None:
                if j.parent not in index:
                    raise SkeletonError(f"joint {j.name}: unknown parent {j.parent!r}")
                if index[j.parent] >= index[j.name]:
                    raise SkeletonError(
                        f"joint {j.name}: parents must precede children")
                if np.linalg.norm(j.offset) <= 0.0:
                    raise SkeletonError(f"joint {j.name}: bone length must be positive")
        object.__setattr__(self, "_index", index)

    @property
    def joint_names(self) -> tuple[str, ...]:
        return tuple(j.name for j in self.joints)

    def joint(self, name: str) -> JointSpec:
        try:
            return self.joints[self._index[name]]
        except KeyError:
            raise SkeletonError(f"unknown joint {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def children(self, name: str) -> list[str]:
        return [j.name for j in self.joints if j.parent == name]

    def ancestors(self, name: str) -> list[str]:
        """Chain from root (exclusive) down to `name` (exclusive), in tree order."""
        chain = []
        j = self.joint(name)
        while j.parent is not None:
            chain.append(j.parent)
            j = self.joint(j.parent)
        chain.reverse()
        return chain[1:] if chain and chain[0] == ROOT_NAME else chain


def _mirror(offset):
    x, y, z = offset
    return (-x, y, z)


def default_skeleton() -> Skeleton:
    # arms and legs carry a slight rest bend so end effectors are not at the
    # singular full-extension boundary of their IK chains
    left = {
        "clavicle": (0.09, 0.13, 0.0),
        "shoulder": (0.13, 0.0, 0.0),
        "elbow": (0.29, 0.0, 0.0),
        "hand": (0.16, 0.0, 0.20),
        "hip": (0.10, -0.06, 0.0),
        "knee": (0.0, -0.42, 0.0),
        "foot": (0.0, -0.37, -0.10),
    }
    specs = [
        JointSpec("waist", None, np.zeros(3)),
        JointSpec("spine", "waist", np.array([0.0, 0.15, 0.0])),
        JointSpec("chest", "spine", np.array([0.0, 0.15, 0.0])),
        JointSpec("neck", "chest", np.array([0.0, 0.15, 0.0])),
        JointSpec("head", "neck", np.array([0.0, 0.10, 0.0])),
    ]
    for side, fix in (("left", lambda o: o), ("right", _mirror)):
        specs += [
            JointSpec(f"{side}_clavicle", "chest", np.array(fix(left["clavicle"]))),
            JointSpec(f"{side}_shoulder", f"{side}_clavicle", np.array(fix(left["shoulder"]))),
            JointSpec(f"{side}_elbow", f"{side}_shoulder", np.array(fix(left["elbow"]))),
            JointSpec(f"{side}_hand", f"{side}_elbow", np.array(fix(left["hand"]))),
        ]
    for side, fix in (("left", lambda o: o), ("right", _mirror)):
        specs += [
            JointSpec(f"{side}_hip", "waist", np.array(fix(left["hip"]))),
            JointSpec(f"{side}_knee", f"{side}_hip", np.array(fix(left["knee"]))),
            JointSpec(f"{side}_foot", f"{side}_knee", np.array(fix(left["foot"]))),
        ]
    return Skeleton(tuple(specs))
