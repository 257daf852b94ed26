"""Clip serialization: JSON clip documents and BVH export."""

from __future__ import annotations

import json
import math

import numpy as np

from . import quat
from .motion import MotionClip, Pose
from .skeleton import JointSpec, Skeleton

LOAD_QUAT_TOL = 1e-3


class ClipFormatError(ValueError):
    pass


def _require(doc: dict, field: str, where: str = "document"):
    if field not in doc:
        raise ClipFormatError(f"missing field {field} in {where}")
    return doc[field]


def _reject_unknown(doc: dict, allowed: set, where: str):
    extra = set(doc) - allowed
    if extra:
        raise ClipFormatError(f"unknown field {sorted(extra)[0]} in {where}")


def load_clip(data: bytes | str) -> MotionClip:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise ClipFormatError(f"malformed JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ClipFormatError("clip document must be a JSON object")
    _reject_unknown(doc, {"fps", "skeleton", "frames"}, "document")
    fps = _require(doc, "fps")
    if not isinstance(fps, int) or fps <= 0:
        raise ClipFormatError("field fps must be a positive integer")

    specs = []
    for i, jdoc in enumerate(_require(doc, "skeleton")):
        _reject_unknown(jdoc, {"name", "parent", "offset"}, f"skeleton[{i}]")
        specs.append(JointSpec(
            _require(jdoc, "name", f"skeleton[{i}]"),
            jdoc.get("parent"),
            np.array(_require(jdoc, "offset", f"skeleton[{i}]"), dtype=float),
        ))
    skeleton = Skeleton(tuple(specs))

    frames = []
    names = set(skeleton.joint_names)
    for i, fdoc in enumerate(_require(doc, "frames")):
        _reject_unknown(fdoc, {"root", "rotations"}, f"frames[{i}]")
        rotations = _require(fdoc, "rotations", f"frames[{i}]")
        rots = {}
        for name, q in rotations.items():
            if name not in names:
                raise ClipFormatError(f"unknown joint name {name!r} in frames[{i}]")
            q = np.asarray(q, dtype=float)
            if q.shape != (4,):
                raise ClipFormatError(f"frames[{i}].rotations.{name}: expected 4 values")
            n = np.linalg.norm(q)
            if abs(n - 1.0) > LOAD_QUAT_TOL:
                raise ClipFormatError(
                    f"frames[{i}].rotations.{name}: quaternion norm {n:.6f} "
                    f"deviates more than {LOAD_QUAT_TOL}")
            # keep already-normalized values bit-exact so that round trips
            # through JSON are stable
            rots[name] = q if abs(n - 1.0) < 1e-12 else q / n
        missing = names - set(rots)
        if missing:
            raise ClipFormatError(f"frames[{i}]: missing rotation for {sorted(missing)[0]}")
        frames.append(Pose(np.array(_require(fdoc, "root", f"frames[{i}]"), dtype=float), rots))
    return MotionClip(skeleton, tuple(frames), fps)


def clip_to_doc(clip: MotionClip) -> dict:
    return {
        "fps": clip.fps,
        "skeleton": [
            {"name": j.name, "parent": j.parent, "offset": [float(v) for v in j.offset]}
            for j in clip.skeleton.joints
        ],
        "frames": [
            {
                "root": [float(v) for v in p.root_translation],
                "rotations": {n: [float(v) for v in p.joint_rotations[n]]
                              for n in clip.skeleton.joint_names},
            }
            for p in clip.frames
        ],
    }


def save_clip(clip: MotionClip) -> bytes:
    return json.dumps(clip_to_doc(clip), separators=(",", ":")).encode()


def export_bvh(clip: MotionClip) -> bytes:
    """BVH text with ZXY Euler rotation channels, offsets in meters."""
    sk = clip.skeleton
    lines: list[str] = ["HIERARCHY"]
    channel_order: list[str] = []

    def emit(name: str, depth: int):
        j = sk.joint(name)
        ind = "  " * depth
        kw = "ROOT" if j.parent is None else "JOINT"
        lines.append(f"{ind}{kw} {name}")
        lines.append(f"{ind}{{")
        off = j.offset
        lines.append(f"{ind}  OFFSET {off[0]:.6f} {off[1]:.6f} {off[2]:.6f}")
        if j.parent is None:
            lines.append(f"{ind}  CHANNELS 6 Xposition Yposition Zposition "
                         "Zrotation Xrotation Yrotation")
        else:
            lines.append(f"{ind}  CHANNELS 3 Zrotation Xrotation Yrotation")
        channel_order.append(name)
        kids = sk.children(name)
        if kids:
            for k in kids:
                emit(k, depth + 1)
        else:
            lines.append(f"{ind}  End Site")
            lines.append(f"{ind}  {{")
            lines.append(f"{ind}    OFFSET 0.000000 0.000000 0.000000")
            lines.append(f"{ind}  }}")
        lines.append(f"{ind}}}")

    emit(sk.joints[0].name, 0)
    lines.append("MOTION")
    lines.append(f"Frames: {len(clip)}")
    lines.append(f"Frame Time: {1.0 / clip.fps:.8f}")
    for pose in clip.frames:
        row: list[str] = []
        for name in channel_order:
            q = pose.joint_rotations[name]
            z, x, y = (math.degrees(a) for a in quat.to_euler_zxy(q))
            if name == channel_order[0]:
                t = pose.root_translation
                row += [f"{t[0]:.6f}", f"{t[1]:.6f}", f"{t[2]:.6f}"]
            row += [f"{z:.6f}", f"{x:.6f}", f"{y:.6f}"]
        lines.append(" ".join(row))
    return ("\n".join(lines) + "\n").encode()
