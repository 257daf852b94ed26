from .schedule import DiffusionSchedule, cosine_schedule, lambda_blend
from .tensorize import FeatureLayout, clip_to_tensor, tensor_to_poses, layout_for
from .spline import HermiteSpline, spline_infill
from .trajectory import SplineTrajectoryInfiller, trajectory_infill
from .condition import InfillCondition, build_condition
from .diffusion import noise_sample, generative_infill, training_step
from .denoiser import SmoothingOracleDenoiser, ToyTransformerDenoiser, TorchDenoiserAdapter
from .engine import EngineConfig, ExecutionResult, execute_program

__all__ = [
    "DiffusionSchedule", "cosine_schedule", "lambda_blend",
    "FeatureLayout", "clip_to_tensor", "tensor_to_poses", "layout_for",
    "HermiteSpline", "spline_infill",
    "SplineTrajectoryInfiller", "trajectory_infill",
    "InfillCondition", "build_condition",
    "noise_sample", "generative_infill", "training_step",
    "SmoothingOracleDenoiser", "ToyTransformerDenoiser", "TorchDenoiserAdapter",
    "EngineConfig", "ExecutionResult", "execute_program",
]
