"""Data types for the instruction-to-program compiler."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from ..lang.ast import MEOProgram


class InductionError(RuntimeError):
    def __init__(self, message: str, transcript: list | None = None):
        super().__init__(message)
        self.transcript = transcript or []


class TransportError(InductionError):
    pass


@dataclass(frozen=True)
class EditPrompt:
    instruction: str
    source_description: str = ""

    def __post_init__(self):
        if not self.instruction.strip():
            raise ValueError("instruction must be non-empty")


@dataclass(frozen=True)
class JointSubgoal:
    joint: str
    text: str


@dataclass(frozen=True)
class PromptDecomposition:
    e_ctx: str
    e_goal: str
    e_f: Optional[str]
    subgoals: tuple = ()

    def __post_init__(self):
        if not self.e_goal.strip():
            raise ValueError("goal description must be non-empty")
        object.__setattr__(self, "subgoals", tuple(self.subgoals))


class Node(str, enum.Enum):
    ROOT = "root"
    TIME_PARSER = "time_parser"
    TEMPORAL_LOOKUP = "temporal_lookup"
    JOINT_PARSER = "joint_parser"
    SPATIAL_LOOKUP = "spatial_lookup"


@dataclass(frozen=True)
class NodeResult:
    node: Node
    structured_output: dict
    justification: str
    attempts: int
    raw: str = ""


@dataclass(frozen=True)
class Turn:
    prompt: EditPrompt
    decomposition: PromptDecomposition
    program: MEOProgram
    raw_agent_responses: tuple = ()


@dataclass
class SessionHistory:
    turns: list = field(default_factory=list)

    def append(self, turn: Turn) -> None:
        self.turns.append(turn)

    def __len__(self) -> int:
        return len(self.turns)


@dataclass(frozen=True)
class InductionResult:
    program: MEOProgram
    decomposition: PromptDecomposition
    node_trace: tuple
