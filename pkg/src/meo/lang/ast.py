"""Typed AST for motion editing operator programs.

Vocabularies are closed enumerations; the parser accepts them
case-insensitively and the printer emits canonical lowercase.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from ..skeleton import EDITABLE_JOINTS


class JointName(str, enum.Enum):
    RIGHT_ELBOW = "right_elbow"
    LEFT_ELBOW = "left_elbow"
    RIGHT_HIP = "right_hip"
    LEFT_HIP = "left_hip"
    RIGHT_KNEE = "right_knee"
    LEFT_KNEE = "left_knee"
    RIGHT_SHOULDER = "right_shoulder"
    LEFT_SHOULDER = "left_shoulder"
    RIGHT_HAND = "right_hand"
    LEFT_HAND = "left_hand"
    RIGHT_FOOT = "right_foot"
    LEFT_FOOT = "left_foot"
    WAIST = "waist"
    HEAD = "head"


assert tuple(j.value for j in JointName) == EDITABLE_JOINTS


class RotationVerb(str, enum.Enum):
    ADDUCT = "adduct"
    ABDUCT = "abduct"
    FLEX = "flex"
    EXTEND = "extend"


class TranslationDir(str, enum.Enum):
    IN = "in"
    OUT = "out"
    FORWARD = "forward"
    BACKWARD = "backward"
    UP = "up"
    DOWN = "down"


class ExplicitFrame(str, enum.Enum):
    START = "start"
    END = "end"
    MIDDLE = "middle"
    ENTIRE_MOTION = "entire_motion"


class TemporalRelation(str, enum.Enum):
    BEFORE = "before"
    AFTER = "after"
    AT = "at"


class Extremum(str, enum.Enum):
    HIGHEST = "highest"
    LOWEST = "lowest"
    FURTHEST = "furthest"
    CLOSEST = "closest"


@dataclass(frozen=True)
class Rotate:
    verb: RotationVerb
    magnitude_deg: Optional[float] = None

    def __post_init__(self):
        if self.magnitude_deg is not None and not self.magnitude_deg > 0:
            raise ValueError("rotation magnitude must be positive")


@dataclass(frozen=True)
class Translate:
    direction: TranslationDir
    relative_to: Optional[JointName] = None
    magnitude_m: Optional[float] = None

    def __post_init__(self):
        if self.magnitude_m is not None and not self.magnitude_m > 0:
            raise ValueError("translation magnitude must be positive")


@dataclass(frozen=True)
class JointConstraint:
    joint: JointName
    kind: Union[Rotate, Translate]

    def __post_init__(self):
        if isinstance(self.kind, Translate) and self.kind.relative_to == self.joint:
            raise ValueError("relative_to must differ from the constrained joint")


@dataclass(frozen=True)
class Explicit:
    g: ExplicitFrame


@dataclass(frozen=True)
class Implicit:
    relation: TemporalRelation
    anchor_joint: JointName
    extremum: Extremum


@dataclass(frozen=True)
class Index:
    frame: int

    def __post_init__(self):
        if self.frame < 0:
            raise ValueError("frame index must be non-negative")


FrameRef = Union[Explicit, Implicit, Index]


@dataclass(frozen=True)
class MEO:
    constraint: JointConstraint
    frame: FrameRef


@dataclass(frozen=True)
class MEOProgram:
    ops: tuple

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))


def program_to_doc(program: MEOProgram) -> list:
    out = []
    for op in program.ops:
        c = op.constraint
        if isinstance(c.kind, Rotate):
            kind = {"rotate": {"verb": c.kind.verb.value,
                               "magnitude_deg": c.kind.magnitude_deg}}
        else:
            kind = {"translate": {
                "direction": c.kind.direction.value,
                "relative_to": c.kind.relative_to.value if c.kind.relative_to else None,
                "magnitude_m": c.kind.magnitude_m,
            }}
        f = op.frame
        if isinstance(f, Explicit):
            frame = {"explicit": f.g.value}
        elif isinstance(f, Implicit):
            frame = {"when": {"relation": f.relation.value,
                              "anchor_joint": f.anchor_joint.value,
                              "extremum": f.extremum.value}}
        else:
            frame = {"index": f.frame}
        out.append({"joint": c.joint.value, "constraint": kind, "frame": frame})
    return out


def program_from_doc(doc: list) -> MEOProgram:
    ops = []
    for item in doc:
        joint = JointName(item["joint"])
        kind_doc = item["constraint"]
        if "rotate" in kind_doc:
            r = kind_doc["rotate"]
            kind = Rotate(RotationVerb(r["verb"]), r.get("magnitude_deg"))
        else:
            t = kind_doc["translate"]
            rel = t.get("relative_to")
            kind = Translate(TranslationDir(t["direction"]),
                             JointName(rel) if rel else None,
                             t.get("magnitude_m"))
        f_doc = item["frame"]
        if "explicit" in f_doc:
            frame: FrameRef = Explicit(ExplicitFrame(f_doc["explicit"]))
        elif "when" in f_doc:
            w = f_doc["when"]
            frame = Implicit(TemporalRelation(w["relation"]),
                             JointName(w["anchor_joint"]), Extremum(w["extremum"]))
        else:
            frame = Index(int(f_doc["index"]))
        ops.append(MEO(JointConstraint(joint, kind), frame))
    return MEOProgram(tuple(ops))
