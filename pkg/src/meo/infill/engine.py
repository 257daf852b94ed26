"""Execution engine: keyframe edits plus infilling, in three variants.

  interp  spline interpolation only (deterministic baseline)
  eng     two-stage: trajectory infilling, then generative body infilling
          with spline guidance for non-root edits
  eng-ss  single-stage: generative infilling without the trajectory stage
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..lang.ast import MEOProgram
from ..lang.printer import print_meo
from ..motion import MotionClip
from ..skeleton import ROOT_NAME
from ..keyframe.apply import execute_meo_keyframes
from .condition import build_condition
from .denoiser import SmoothingOracleDenoiser
from .diffusion import generative_infill
from .schedule import DiffusionSchedule, cosine_schedule
from .spline import spline_infill
from .trajectory import trajectory_infill

VARIANTS = ("interp", "eng", "eng-ss")
DEFAULT_CONTEXT_W = 5


@dataclass
class EngineConfig:
    variant: str = "interp"
    context_w: int = DEFAULT_CONTEXT_W
    seed: int = 0
    schedule: Optional[DiffusionSchedule] = None
    denoiser: object = None  # numpy denoiser protocol; oracle when unset

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown engine variant {self.variant!r}")

    def resolved_schedule(self) -> DiffusionSchedule:
        return self.schedule or cosine_schedule()

    def resolved_denoiser(self):
        return self.denoiser or SmoothingOracleDenoiser()


@dataclass
class ExecutionResult:
    clip_edited: MotionClip
    clip_spline: Optional[MotionClip]
    report: dict = field(default_factory=dict)


def execute_program(clip_source: MotionClip, program: MEOProgram,
                    config: EngineConfig | None = None) -> ExecutionResult:
    config = config or EngineConfig()
    execution = execute_meo_keyframes(clip_source, program)
    base = execution.base_clip
    keyframes = execution.keyframes

    report = {
        "engine_variant": config.variant,
        "program": print_meo(program),
        "resolved_frames": [
            {"op": i, "frame": rf.frame_index, "source": rf.source,
             "entire": rf.entire, "anchor_value": rf.anchor_value}
            for i, rf in execution.resolved
        ],
        "warnings": [w for kf in keyframes for w in kf.warnings],
        "keyframes": [kf.frame_index for kf in keyframes],
        "touched_joints": sorted({j for kf in keyframes for j in kf.touched_joints}),
    }

    if not keyframes:  # all ops were entire-motion edits; nothing to infill
        return ExecutionResult(base, None, report)

    w = config.context_w
    spline = spline_infill(base, keyframes, w)
    if config.variant == "interp":
        return ExecutionResult(spline, spline, report)

    rng = np.random.default_rng(config.seed)
    schedule = config.resolved_schedule()
    denoiser = config.resolved_denoiser()
    root_touched = any(ROOT_NAME in kf.touched_joints for kf in keyframes)
    guidance = None if root_touched else spline
    report["spline_guidance"] = guidance is not None

    if config.variant == "eng":
        q_hat = trajectory_infill(base, keyframes, w)
        condition = build_condition(base, keyframes, w, q_hat)
    else:  # eng-ss
        condition = build_condition(base, keyframes, w)
    edited = generative_infill(denoiser, condition, schedule, guidance, rng)
    return ExecutionResult(edited, spline, report)
