"""Static validation of an MEO program against a concrete clip."""

from __future__ import annotations

from .ast import Implicit, Index, MEOProgram, Rotate, Translate


def validate_meo(program: MEOProgram, clip) -> list:
    """Returns a list of diagnostic strings; empty means the program is executable."""
    from ..keyframe.verbs import rotation_axis  # deferred: keyframe imports this package

    diagnostics = []
    names = set(clip.skeleton.joint_names)
    for i, op in enumerate(program.ops):
        where = f"op {i}"
        c = op.constraint
        if c.joint.value not in names:
            diagnostics.append(f"{where}: joint {c.joint.value!r} not in clip skeleton")
        if isinstance(c.kind, Rotate):
            if rotation_axis(c.joint, c.kind.verb) is None:
                diagnostics.append(
                    f"{where}: verb {c.kind.verb.value!r} not applicable to "
                    f"{c.joint.value!r}")
        elif isinstance(c.kind, Translate) and c.kind.relative_to is not None:
            if c.kind.relative_to.value not in names:
                diagnostics.append(
                    f"{where}: joint {c.kind.relative_to.value!r} not in clip skeleton")
        f = op.frame
        if isinstance(f, Index) and f.frame >= len(clip):
            diagnostics.append(
                f"{where}: frame {f.frame} out of range 0..{len(clip) - 1}")
        elif isinstance(f, Implicit) and f.anchor_joint.value not in names:
            diagnostics.append(
                f"{where}: joint {f.anchor_joint.value!r} not in clip skeleton")
    return diagnostics
