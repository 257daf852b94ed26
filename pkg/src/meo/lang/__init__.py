from .ast import (
    Explicit,
    ExplicitFrame,
    Extremum,
    FrameRef,
    Implicit,
    Index,
    JointConstraint,
    MEO,
    MEOProgram,
    Rotate,
    RotationVerb,
    TemporalRelation,
    Translate,
    TranslationDir,
    program_from_doc,
    program_to_doc,
)
from .catalog import catalog_names
from .parser import ParseError, parse_meo
from .printer import print_meo
from .validate import validate_meo

__all__ = [
    "MEO", "MEOProgram", "JointConstraint", "Rotate", "Translate",
    "FrameRef", "Explicit", "Implicit", "Index",
    "ExplicitFrame", "Extremum", "RotationVerb", "TemporalRelation", "TranslationDir",
    "parse_meo", "print_meo", "validate_meo", "catalog_names",
    "ParseError", "program_to_doc", "program_from_doc",
]
