"""Per-node prompting: message construction, response validation, retry."""

from __future__ import annotations

import json
import re
from importlib import resources

from ..lang.ast import JointName
from ..lang.catalog import spatial_names, temporal_names
from .types import InductionError, Node, NodeResult

MAX_RETRIES = 3
TEMPERATURE = 0.0

GLOBAL_BRANCH = "global"
MOMENT_BRANCH = "specific moment"

_TASKS = {
    Node.ROOT: (
        "You decompose a motion editing instruction into three parts: a "
        "description of the source motion, the editing goal, and an optional "
        "clause saying when the edit applies."),
    Node.TIME_PARSER: (
        "You decide whether a timing clause refers to the motion globally "
        f"(answer {GLOBAL_BRANCH!r}) or to a specific moment or action "
        f"(answer {MOMENT_BRANCH!r}). A missing clause is global."),
    Node.TEMPORAL_LOOKUP: (
        "You choose the frame-reference name from the vocabulary below that "
        "best matches the timing clause."),
    Node.JOINT_PARSER: (
        "You decide which primary skeleton joints must be edited to achieve "
        "the goal, and state the sub-goal each joint must accomplish."),
    Node.SPATIAL_LOOKUP: (
        "You choose the edit name from the vocabulary below that best "
        "fulfills the given joint's sub-goal. The chosen name must edit "
        "exactly the given joint."),
}

_SCHEMAS = {
    Node.ROOT: ('{"e_ctx": "<source motion description>", "e_goal": "<editing goal>", '
                '"e_f": "<timing clause or null>", "justification": "<reasoning>"}'),
    Node.TIME_PARSER: ('{"answer": "%s" | "%s", "justification": "<reasoning>"}'
                       % (GLOBAL_BRANCH, MOMENT_BRANCH)),
    Node.TEMPORAL_LOOKUP: '{"name": "<vocabulary name>", "justification": "<reasoning>"}',
    Node.JOINT_PARSER: ('{"joints": [{"joint": "<joint name>", "sub_goal": "<what this '
                        'joint must do>"}], "justification": "<reasoning>"}'),
    Node.SPATIAL_LOOKUP: '{"name": "<vocabulary name>", "justification": "<reasoning>"}',
}

_JOINT_LIST = ", ".join(j.value for j in JointName)


def _vocabulary(node: Node) -> list:
    if node is Node.TEMPORAL_LOOKUP:
        return sorted(temporal_names())
    if node is Node.SPATIAL_LOOKUP:
        return sorted(spatial_names())
    return []


def _demonstrations(node: Node) -> list:
    text = resources.files("meo.inducer.demos").joinpath(f"{node.value}.json").read_text()
    return json.loads(text)["demonstrations"]


def _system_preamble(node: Node) -> str:
    parts = [
        _TASKS[node],
        "Respond with a single JSON object of this exact shape: " + _SCHEMAS[node],
        "You must justify your choice in the justification field.",
    ]
    if node is Node.JOINT_PARSER:
        parts.append("Valid joint names: " + _JOINT_LIST)
    vocab = _vocabulary(node)
    if vocab:
        parts.append("Valid vocabulary names: " + ", ".join(vocab))
    return "\n".join(parts)


def render_input(node: Node, inputs: dict) -> str:
    return json.dumps(inputs, sort_keys=True)


def build_messages(node: Node, inputs: dict, history=None) -> list:
    """System preamble + in-context demonstrations + (Root only) prior turns
    + the current input. Deterministic for identical arguments."""
    messages = [{"role": "system", "content": _system_preamble(node)}]
    for demo in _demonstrations(node):
        messages.append({"role": "user", "content": render_input(node, demo["input"])})
        messages.append({"role": "assistant", "content": json.dumps(demo["output"],
                                                                    sort_keys=True)})
    if node is Node.ROOT and history is not None:
        for turn in history.turns:
            messages.append({"role": "user", "content": turn.prompt.instruction})
            if turn.raw_agent_responses:
                messages.append({"role": "assistant",
                                 "content": turn.raw_agent_responses[0]})
    messages.append({"role": "user", "content": render_input(node, inputs)})
    return messages


_FENCE_RE = re.compile(r"^```(?:json)?\s*|\s*```$")


def _parse_json_object(text: str) -> dict:
    cleaned = _FENCE_RE.sub("", text.strip())
    obj = json.loads(cleaned)
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    return obj


def _validate(node: Node, obj: dict, inputs: dict) -> dict:
    def need(key, types=str):
        if key not in obj:
            raise ValueError(f"missing field {key!r}")
        if not isinstance(obj[key], types):
            raise ValueError(f"field {key!r} has the wrong type")
        return obj[key]

    if node is Node.ROOT:
        need("e_ctx")
        need("e_goal")
        if not obj["e_goal"].strip():
            raise ValueError("e_goal must be non-empty")
        if obj.get("e_f") is not None and not isinstance(obj["e_f"], str):
            raise ValueError("field 'e_f' must be a string or null")
    elif node is Node.TIME_PARSER:
        if need("answer") not in (GLOBAL_BRANCH, MOMENT_BRANCH):
            raise ValueError(
                f"answer must be {GLOBAL_BRANCH!r} or {MOMENT_BRANCH!r}")
    elif node is Node.TEMPORAL_LOOKUP:
        if need("name") not in temporal_names():
            raise ValueError(f"unrecognized frame-reference name {obj['name']!r}")
    elif node is Node.JOINT_PARSER:
        joints = need("joints", list)
        if not joints:
            raise ValueError("joints must be non-empty")
        valid = {j.value for j in JointName}
        for item in joints:
            if not isinstance(item, dict) or "joint" not in item or "sub_goal" not in item:
                raise ValueError("each joints entry needs 'joint' and 'sub_goal'")
            if item["joint"] not in valid:
                raise ValueError(f"unrecognized joint {item['joint']!r}")
    elif node is Node.SPATIAL_LOOKUP:
        name = need("name")
        fragment = spatial_names().get(name)
        if fragment is None:
            raise ValueError(f"unrecognized edit name {name!r}")
        if fragment.joint.value != inputs["joint"]:
            raise ValueError(
                f"edit name {name!r} does not edit joint {inputs['joint']!r}")
    return obj


def run_node(node: Node, inputs: dict, backend, history=None,
             max_retries: int = MAX_RETRIES) -> NodeResult:
    messages = build_messages(node, inputs, history)
    transcript = []
    for attempt in range(1, max_retries + 1):
        response = backend.complete(messages, temperature=TEMPERATURE)
        transcript.append(response)
        try:
            obj = _validate(node, _parse_json_object(response), inputs)
        except ValueError as e:
            messages = messages + [
                {"role": "assistant", "content": response},
                {"role": "user",
                 "content": f"Your response was invalid: {e}. "
                            "Reply again with a single valid JSON object."},
            ]
            continue
        return NodeResult(node, obj, str(obj.get("justification", "")), attempt, response)
    raise InductionError(
        f"{node.value} produced no valid output in {max_retries} attempts", transcript)
