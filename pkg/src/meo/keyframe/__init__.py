from .resolve import ExtremumUndefined, ResolvedFrame, resolve_frame
from .apply import (
    DEFAULT_ROTATION_DEG,
    DEFAULT_TRANSLATION_M,
    DEFAULT_RELATIVE_OFFSET_M,
    EditedKeyframe,
    apply_rotation,
    apply_translation,
    execute_meo_keyframes,
)
from .verbs import rotation_axis, verb_axis_table
from .ik import solve_chain, chain_for

__all__ = [
    "ResolvedFrame", "resolve_frame", "ExtremumUndefined",
    "EditedKeyframe", "apply_rotation", "apply_translation", "execute_meo_keyframes",
    "rotation_axis", "verb_axis_table", "solve_chain", "chain_for",
    "DEFAULT_ROTATION_DEG", "DEFAULT_TRANSLATION_M", "DEFAULT_RELATIVE_OFFSET_M",
]
