"""The decision tree that compiles an instruction into an MEO program.

Fixed traversal: Root -> Time Parser -> Temporal look-up -> Joint Parser ->
one Spatial look-up per joint. History is consulted only at the Root node.
"""

from __future__ import annotations

from ..lang.ast import Explicit, ExplicitFrame, JointConstraint, MEO, MEOProgram
from ..lang.catalog import spatial_names, temporal_names
from .nodes import GLOBAL_BRANCH, MAX_RETRIES, Node, run_node
from .types import (
    EditPrompt, InductionResult, JointSubgoal, PromptDecomposition, SessionHistory,
)


def induce(prompt: EditPrompt, history: SessionHistory | None, backend,
           max_retries: int = MAX_RETRIES) -> InductionResult:
    history = history or SessionHistory()
    trace = []

    root = run_node(Node.ROOT, {
        "instruction": prompt.instruction,
        "source_description": prompt.source_description,
    }, backend, history=history, max_retries=max_retries)
    trace.append(root)
    e_ctx = root.structured_output["e_ctx"]
    e_goal = root.structured_output["e_goal"]
    e_f = root.structured_output.get("e_f")

    time = run_node(Node.TIME_PARSER, {"e_f": e_f}, backend, max_retries=max_retries)
    trace.append(time)
    branch = time.structured_output["answer"]

    temporal = run_node(Node.TEMPORAL_LOOKUP, {"e_f": e_f, "branch": branch},
                        backend, max_retries=max_retries)
    trace.append(temporal)
    frame_ref = temporal_names()[temporal.structured_output["name"]]
    if branch == GLOBAL_BRANCH and not isinstance(frame_ref, Explicit):
        # a global branch should land on an explicit frame; fall back safely
        frame_ref = Explicit(ExplicitFrame.ENTIRE_MOTION)

    joints = run_node(Node.JOINT_PARSER, {"e_ctx": e_ctx, "e_goal": e_goal},
                      backend, max_retries=max_retries)
    trace.append(joints)
    subgoals = tuple(JointSubgoal(item["joint"], item["sub_goal"])
                     for item in joints.structured_output["joints"])

    ops = []
    for sg in subgoals:
        spatial = run_node(Node.SPATIAL_LOOKUP,
                           {"joint": sg.joint, "sub_goal": sg.text},
                           backend, max_retries=max_retries)
        trace.append(spatial)
        constraint = spatial_names()[spatial.structured_output["name"]]
        assert isinstance(constraint, JointConstraint)
        ops.append(MEO(constraint, frame_ref))

    decomposition = PromptDecomposition(e_ctx, e_goal, e_f, subgoals)
    return InductionResult(MEOProgram(tuple(ops)), decomposition, tuple(trace))
