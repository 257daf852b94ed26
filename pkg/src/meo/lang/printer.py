"""Canonical text form for MEO programs; parse(print(p)) == p."""

from __future__ import annotations

from .ast import Explicit, Implicit, Index, MEO, MEOProgram, Rotate, Translate


def _num(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def _constraint(meo: MEO) -> str:
    c = meo.constraint
    if isinstance(c.kind, Rotate):
        parts = [c.joint.value, c.kind.verb.value]
        if c.kind.magnitude_deg is not None:
            parts.append(f"{_num(c.kind.magnitude_deg)}deg")
        return f"rotate({', '.join(parts)})"
    parts = [c.joint.value, c.kind.direction.value]
    if c.kind.relative_to is not None:
        parts.append(f"of={c.kind.relative_to.value}")
    if c.kind.magnitude_m is not None:
        parts.append(f"{_num(c.kind.magnitude_m)}m")
    return f"translate({', '.join(parts)})"


def _frame(meo: MEO) -> str:
    f = meo.frame
    if isinstance(f, Explicit):
        return f.g.value
    if isinstance(f, Implicit):
        return f"when({f.anchor_joint.value}, {f.extremum.value}, {f.relation.value})"
    assert isinstance(f, Index)
    return f"frame {f.frame}"


def print_meo(program: MEOProgram) -> str:
    return "; ".join(f"{_constraint(op)} @ {_frame(op)}" for op in program.ops)
