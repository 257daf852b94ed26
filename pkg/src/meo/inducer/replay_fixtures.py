"""Authoring of the replay-backend fixture set.

Simulates the canonical editing flows through the real decision tree,
recording message-list hashes so the replay backend answers them offline.
The committed fixtures/llm_replay.json is regenerated with
``python -m meo.inducer.replay_fixtures <path>``.
"""

from __future__ import annotations

import json
import sys

from .backend import message_hash
from .tree import induce
from .types import EditPrompt, SessionHistory, Turn

SQUAT_INSTRUCTION = ("The character does a squat. "
                     "At the bottom of the squat, jump into the air.")
SQUAT_CONTEXT = "The character does a squat."
KICK_INSTRUCTION = ("A person is kicking with the right foot. "
                    "As you kick, raise the right foot higher.")
KICK_CONTEXT = "A person is kicking with the right foot."
ARM_INSTRUCTION = "Raise your left arm."
ARM_CONTEXT = "A person stands still."


def _j(obj) -> str:
    return json.dumps(obj, sort_keys=True)


_SQUAT_FLOW = [
    _j({"e_ctx": "The character does a squat", "e_goal": "Jump into the air",
        "e_f": "At the bottom of the squat",
        "justification": "The first sentence describes the source motion; the "
                         "edit is the jump, timed to the bottom of the squat."}),
    _j({"answer": "specific moment",
        "justification": "The bottom of the squat is one identifiable instant."}),
    _j({"name": "when_waist_lowest",
        "justification": "At the bottom of a squat the waist is at its lowest."}),
    _j({"joints": [{"joint": "waist",
                    "sub_goal": "To jump into the air, we need to move the waist up"}],
        "justification": "Jumping means the whole body leaves the ground, which "
                         "is expressed by raising the waist."}),
    _j({"name": "move_waist_up",
        "justification": "The sub-goal asks for an upward waist translation."}),
]

_KICK_FLOW = [
    _j({"e_ctx": "A person is kicking with the right foot",
        "e_goal": "Raise the right foot higher", "e_f": "As you kick",
        "justification": "The edit raises the kicking foot, timed to the kick."}),
    _j({"answer": "specific moment",
        "justification": "The kick is a specific action within the motion."}),
    _j({"name": "when_right_foot_highest",
        "justification": "The kick peaks where the right foot is highest."}),
    _j({"joints": [{"joint": "right_foot",
                    "sub_goal": "To kick higher, the right foot must reach a "
                                "greater height at the peak of the kick"}],
        "justification": "The kick height is the height of the kicking foot."}),
    _j({"name": "move_right_foot_up",
        "justification": "A higher kick is an upward right-foot translation."}),
]

_HIGHER_FLOW = [
    _j({"e_ctx": "A person is kicking with the right foot",
        "e_goal": "Raise the right foot even higher", "e_f": "As you kick",
        "justification": "With the previous turn as context, 'higher' refers to "
                         "raising the right foot further during the kick."}),
    # time parser and temporal look-up repeat the kick flow (same inputs)
    _j({"joints": [{"joint": "right_foot",
                    "sub_goal": "Raise the right foot further up at the peak of "
                                "the kick"}],
        "justification": "The prior edit targeted the right foot; 'higher' asks "
                         "for more of the same."}),
    _j({"name": "move_right_foot_up",
        "justification": "Raising further is again an upward translation."}),
]

_ARM_FLOW = [
    _j({"e_ctx": "A person stands still", "e_goal": "Raise your left arm",
        "e_f": None,
        "justification": "No timing clause is given; the goal is to raise the arm."}),
    _j({"answer": "global",
        "justification": "Without a timing clause the edit is global."}),
    _j({"name": "entire_motion",
        "justification": "A global edit covers the entire motion."}),
    _j({"joints": [{"joint": "left_hand",
                    "sub_goal": "Raising the left arm means moving the left hand "
                                "upward"}],
        "justification": "The arm is raised through its end effector."}),
    _j({"name": "move_left_hand_up",
        "justification": "Raising the arm is an upward left-hand translation."}),
]


class _Recorder:
    def __init__(self, script: list, fixtures: dict):
        self.script = list(script)
        self.fixtures = fixtures

    def complete(self, messages, temperature=0.0, timeout=60.0) -> str:
        response = self.script.pop(0)
        self.fixtures[message_hash(messages)] = response
        return response


def build_default_fixtures() -> dict:
    fixtures: dict = {}

    squat = EditPrompt(SQUAT_INSTRUCTION, SQUAT_CONTEXT)
    induce(squat, SessionHistory(), _Recorder(_SQUAT_FLOW, fixtures))

    kick = EditPrompt(KICK_INSTRUCTION, KICK_CONTEXT)
    kick_result = induce(kick, SessionHistory(), _Recorder(_KICK_FLOW, fixtures))

    history = SessionHistory()
    history.append(Turn(kick, kick_result.decomposition, kick_result.program,
                        tuple(nr.raw for nr in kick_result.node_trace)))
    higher = EditPrompt("higher", KICK_CONTEXT)
    script = [_HIGHER_FLOW[0], _KICK_FLOW[1], _KICK_FLOW[2], _HIGHER_FLOW[1],
              _HIGHER_FLOW[2]]
    induce(higher, history, _Recorder(script, fixtures))

    arm = EditPrompt(ARM_INSTRUCTION, ARM_CONTEXT)
    induce(arm, SessionHistory(), _Recorder(_ARM_FLOW, fixtures))
    return fixtures


def main(argv=None):
    argv = argv if argv is not None else sys.argv[1:]
    path = argv[0] if argv else "fixtures/llm_replay.json"
    with open(path, "w") as f:
        json.dump(build_default_fixtures(), f, indent=1, sort_keys=True)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
