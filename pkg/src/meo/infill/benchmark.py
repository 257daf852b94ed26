"""Held-out evaluation protocol for the toy denoiser.

Fixes a seeded set of (timestep, mask, noise) evaluation cases per clip and
scores any x0-predictor on them, so the trained model and the context-mean
baseline see identical inputs. The baseline predicts every frame as the
mean of the conditioned (clean) frames of the clip — the cheapest predictor
that uses the conditioning at all; a trained model must beat it.
"""

from __future__ import annotations

import numpy as np

from .diffusion import _random_training_mask
from .schedule import DiffusionSchedule
from .tensorize import clip_to_tensor, layout_for


def context_mean_predict(cond: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Predict all frames as the mean conditioned frame of (cond, mask)."""
    row_weight = mask.mean(axis=1)  # fraction of each frame conditioned
    full = row_weight >= 1.0 - 1e-12
    if full.any():
        mean = cond[full].mean(axis=0)
    else:
        mean = np.zeros(cond.shape[1])
    return np.tile(mean, (cond.shape[0], 1))


def evaluation_cases(clips, schedule: DiffusionSchedule, w: int, seed: int,
                     cases_per_clip: int = 4) -> list:
    """Deterministic list of (x, x_in, cond, t, mask) evaluation tuples."""
    rng = np.random.default_rng(seed)
    layout = layout_for(clips[0].skeleton)
    cases = []
    for clip in clips:
        x = clip_to_tensor(clip, layout)
        n, d = x.shape
        for _ in range(cases_per_clip):
            t = int(rng.integers(1, schedule.steps + 1))
            mask = _random_training_mask(n, d, layout.group_slice("root"), w, rng)
            a = schedule.alpha_bar(t)
            noisy = np.sqrt(a) * x + np.sqrt(1.0 - a) * rng.standard_normal(x.shape)
            x_in = mask * x + (1.0 - mask) * noisy
            cond = mask * x
            cases.append((x, x_in, cond, t, mask))
    return cases


def held_out_loss(predict, cases) -> float:
    """Mean squared x0-prediction error of ``predict(x_in, cond, t, mask)``."""
    losses = [float(np.mean((x - predict(x_in, cond, t, mask)) ** 2))
              for x, x_in, cond, t, mask in cases]
    return float(np.mean(losses))


def baseline_loss(cases) -> float:
    return held_out_loss(
        lambda x_in, cond, t, mask: context_mean_predict(cond, mask), cases)


TRAIN_CORPUS = (64, 11)  # (n_clips, seed)
HELDOUT_CORPUS = (16, 12)
TRAIN_W = 5


def train_toy_model(steps: int, seed: int = 0, batch: int = 8,
                    schedule: DiffusionSchedule | None = None):
    """The committed training recipe: corpus, model, optimizer, loop.

    Returns (model, losses, schedule). Deterministic for a given seed.
    """
    import torch

    from .dataset import generate_corpus
    from .denoiser import ToyTransformerDenoiser
    from .diffusion import training_step
    from .schedule import cosine_schedule

    clips = generate_corpus(*TRAIN_CORPUS)
    layout = layout_for(clips[0].skeleton)
    tensors = np.stack([clip_to_tensor(c, layout) for c in clips])
    schedule = schedule or cosine_schedule()

    rng = np.random.default_rng(seed)
    torch.manual_seed(seed)
    model = ToyTransformerDenoiser(layout.dim)
    optimizer = torch.optim.Adam(model.parameters(), lr=1e-3)
    losses = []
    for _ in range(steps):
        idx = rng.integers(0, len(tensors), size=batch)
        losses.append(training_step(model, tensors[idx], schedule, TRAIN_W,
                                    rng, optimizer,
                                    root_slice=layout.group_slice("root")))
    return model, losses, schedule


def model_predictor(model):
    """Wrap a torch denoiser as an x0-predictor for held_out_loss."""
    import torch

    def predict(x_in, cond, t, mask):
        model.eval()
        with torch.no_grad():
            out = model(torch.as_tensor(x_in, dtype=torch.float32)[None],
                        torch.as_tensor(cond, dtype=torch.float32)[None],
                        torch.as_tensor([t]),
                        torch.as_tensor(mask, dtype=torch.float32)[None])
        return out[0].numpy().astype(float)
    return predict
