"""Diffusion noising, training step, and spline-guided inference."""

from __future__ import annotations

import numpy as np
import torch

from .. import quat
from ..motion import MotionClip, Pose
from ..skeleton import ROOT_NAME
from .condition import InfillCondition
from .schedule import DiffusionSchedule, lambda_blend
from .tensorize import clip_to_tensor, features_to_pose


def noise_sample(x: np.ndarray, t: int, schedule: DiffusionSchedule,
                 rng: np.random.Generator) -> np.ndarray:
    """Forward noising q(x_t | x) = N(sqrt(a_t) x, (1 - a_t) I)."""
    a = schedule.alpha_bar(t)
    eps = rng.standard_normal(x.shape)
    return np.sqrt(a) * x + np.sqrt(1.0 - a) * eps


def _random_training_mask(n: int, dim: int, root_slice: slice, w: int,
                          rng: np.random.Generator) -> np.ndarray:
    mask = np.zeros((n, dim))
    mask[:w] = 1.0
    mask[n - w:] = 1.0
    n_keys = int(rng.integers(1, 3))
    interior = rng.choice(np.arange(w, n - w), size=min(n_keys, n - 2 * w), replace=False)
    mask[interior] = 1.0
    if rng.random() < 0.5:  # emulate trajectory conditioning: whole root row
        mask[:, root_slice] = 1.0
    return mask


def training_step(denoiser, batch, schedule: DiffusionSchedule, w: int,
                  rng: np.random.Generator, optimizer=None,
                  root_slice: slice = slice(0, 5),
                  loss_on_entire_sequence: bool = True) -> float:
    """One denoising training step over a batch of clip tensors (B, N, D)."""
    batch = torch.as_tensor(np.asarray(batch), dtype=torch.float32)
    b, n, d = batch.shape
    ts = rng.integers(1, schedule.steps + 1, size=b)
    masks = np.stack([_random_training_mask(n, d, root_slice, w, rng) for _ in range(b)])
    a = np.array([schedule.alpha_bar(int(t)) for t in ts])[:, None, None]
    eps = rng.standard_normal(batch.shape)
    noisy = np.sqrt(a) * batch.numpy() + np.sqrt(1.0 - a) * eps

    m = torch.as_tensor(masks, dtype=torch.float32)
    x = batch
    x_t = torch.as_tensor(noisy, dtype=torch.float32)
    model_input = m * x + (1.0 - m) * x_t
    cond = m * x
    t_tensor = torch.as_tensor(ts, dtype=torch.long)

    if isinstance(denoiser, torch.nn.Module):
        pred = denoiser(model_input, cond, t_tensor, m)
    else:
        outs = [denoiser(model_input[i].numpy(), cond[i].numpy(), int(ts[i]),
                         masks[i]) for i in range(b)]
        pred = torch.as_tensor(np.stack(outs), dtype=torch.float32)

    if loss_on_entire_sequence:
        loss = torch.mean((x - pred) ** 2)
    else:
        weight = 1.0 - m
        loss = torch.sum(weight * (x - pred) ** 2) / torch.clamp(weight.sum(), min=1.0)

    if optimizer is not None and isinstance(denoiser, torch.nn.Module):
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
    return float(loss.detach())


def _assemble_clip(condition: InfillCondition, final: np.ndarray) -> MotionClip:
    """Copy conditioned frames verbatim; decode generated frames, re-imposing
    the conditioned root trajectory exactly where present."""
    clip = condition.clip_source
    layout = condition.layout
    n = condition.n_frames
    key_by_frame = {kf.frame_index: kf for kf in condition.keyframes}
    root_slice = layout.group_slice("root")
    frames = []
    for i in range(n):
        if i in key_by_frame:
            frames.append(key_by_frame[i].pose)
            continue
        if i < condition.w or i >= n - condition.w:
            frames.append(clip.frames[i])
            continue
        pose = features_to_pose(final[i], layout)
        if condition.root_trajectory is not None and condition.mask[i, root_slice].all():
            target_t = condition.root_trajectory.translations[i]
            target_yaw = condition.root_trajectory.yaw_rotations[i]
            own_yaw = quat.yaw_twist(pose.joint_rotations[ROOT_NAME])
            delta = quat.multiply(target_yaw, quat.conjugate(own_yaw))
            rot = quat.normalize(quat.multiply(delta, pose.joint_rotations[ROOT_NAME]))
            pose = Pose(target_t, {**pose.joint_rotations, ROOT_NAME: rot})
        frames.append(pose)
    return MotionClip(clip.skeleton, tuple(frames), clip.fps)


def generative_infill(denoiser, condition: InfillCondition, schedule: DiffusionSchedule,
                      guidance: MotionClip | None = None,
                      rng: np.random.Generator | None = None) -> MotionClip:
    """Masked-conditioning reverse diffusion with optional spline blending."""
    rng = rng or np.random.default_rng(0)
    m, c = condition.mask, condition.values
    if m.all():
        return _assemble_clip(condition, c.copy())
    if guidance is not None and len(guidance) != condition.n_frames:
        raise ValueError("guidance clip length does not match condition")
    guide = clip_to_tensor(guidance, condition.layout) if guidance is not None else None

    steps = schedule.steps
    x_t = rng.standard_normal(c.shape)
    x0 = c.copy()
    for t in range(steps, 0, -1):
        model_input = m * c + (1.0 - m) * x_t
        x0 = denoiser(model_input, m * c, t, m)
        x0 = m * c + (1.0 - m) * x0
        if t == 1:
            break
        x_t = noise_sample(x0, t - 1, schedule, rng)
        if guide is not None:
            lam = lambda_blend(t, steps)
            if lam > 0.0:
                noised_guide = noise_sample(guide, t - 1, schedule, rng)
                x_t = m * x_t + (1.0 - m) * (lam * noised_guide + (1.0 - lam) * x_t)
    return _assemble_clip(condition, x0)
