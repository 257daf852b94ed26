"""Flattened operator-name vocabulary the LLM look-up nodes choose from.

Temporal names map to frame references, spatial names to joint
constraints; the mapping is bijective with the underlying AST fragments.
"""

from __future__ import annotations

from functools import lru_cache

from .ast import (
    Explicit, ExplicitFrame, Extremum, Implicit, JointConstraint, JointName,
    Rotate, RotationVerb, TemporalRelation, Translate, TranslationDir,
)

_RELATION_PREFIX = {
    TemporalRelation.AT: "when",
    TemporalRelation.BEFORE: "before",
    TemporalRelation.AFTER: "after",
}


@lru_cache(maxsize=1)
def catalog_names() -> dict:
    names: dict = {}
    for g in ExplicitFrame:
        names[g.value] = Explicit(g)
    for rel, prefix in _RELATION_PREFIX.items():
        for joint in JointName:
            for ext in Extremum:
                names[f"{prefix}_{joint.value}_{ext.value}"] = Implicit(rel, joint, ext)
    for joint in JointName:
        for d in TranslationDir:
            names[f"move_{joint.value}_{d.value}"] = JointConstraint(joint, Translate(d))
        for verb in RotationVerb:
            names[f"{verb.value}_{joint.value}"] = JointConstraint(joint, Rotate(verb))
        for d in TranslationDir:
            for rel in JointName:
                if rel is joint:
                    continue
                names[f"move_{joint.value}_{d.value}_of_{rel.value}"] = \
                    JointConstraint(joint, Translate(d, rel))
    return names


@lru_cache(maxsize=1)
def temporal_names() -> dict:
    from .ast import Explicit as E, Implicit as I
    return {k: v for k, v in catalog_names().items() if isinstance(v, (E, I))}


@lru_cache(maxsize=1)
def spatial_names() -> dict:
    return {k: v for k, v in catalog_names().items() if isinstance(v, JointConstraint)}
