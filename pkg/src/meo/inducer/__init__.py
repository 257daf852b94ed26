from .types import (
    EditPrompt, InductionError, InductionResult, JointSubgoal, Node, NodeResult,
    PromptDecomposition, SessionHistory, TransportError, Turn,
)
from .backend import HttpBackend, ReplayBackend, ScriptedBackend, message_hash
from .nodes import MAX_RETRIES, build_messages, run_node
from .tree import induce

__all__ = [
    "EditPrompt", "PromptDecomposition", "SessionHistory", "Turn", "NodeResult",
    "Node", "InductionResult", "InductionError", "TransportError",
    "HttpBackend", "ReplayBackend", "ScriptedBackend", "message_hash",
    "build_messages", "run_node", "induce", "MAX_RETRIES",
]
