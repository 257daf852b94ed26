"""Denoisers: a deterministic smoothing oracle and a small trainable transformer.

A denoiser maps (input, cond, t, mask) to a predicted clean motion tensor of
the same shape as input. `cond` is the masked conditioning M * X and `mask`
the binary conditioning indicator.
"""

from __future__ import annotations

import numpy as np
import torch
from torch import nn


class SmoothingOracleDenoiser:
    """Non-trainable projection: temporal low-pass plus conditioned re-pinning.

    Used in tests and as the default engine denoiser when no checkpoint is
    supplied; deterministic by construction.
    """

    def __init__(self, radius: int = 2):
        self.radius = radius

    def __call__(self, x: np.ndarray, cond: np.ndarray, t: int,
                 mask: np.ndarray) -> np.ndarray:
        r = self.radius
        n = x.shape[0]
        padded = np.concatenate([x[r:0:-1], x, x[-2:-2 - r:-1]], axis=0) if n > r \
            else np.repeat(x, 3, axis=0)
        # windowed mean over 2r+1 frames via cumulative sums, all columns at once
        window = 2 * r + 1
        cs = np.concatenate([np.zeros((1, x.shape[1])),
                             np.cumsum(padded, axis=0)], axis=0)
        smoothed = (cs[window:] - cs[:-window]) / window
        smoothed = smoothed[:n]
        return mask * cond + (1.0 - mask) * smoothed


class _SinusoidalEmbedding(nn.Module):
    def __init__(self, dim: int):
        super().__init__()
        self.dim = dim

    def forward(self, t: torch.Tensor) -> torch.Tensor:
        half = self.dim // 2
        freqs = torch.exp(-np.log(10000.0) * torch.arange(half, device=t.device) / half)
        args = t.float()[:, None] * freqs[None, :]
        return torch.cat([torch.sin(args), torch.cos(args)], dim=-1)


class ToyTransformerDenoiser(nn.Module):
    """Transformer-decoder with a separate conditioning branch.

    The input branch carries the noisy/mixed motion; the conditioning branch
    carries the masked clean motion (concatenated with its mask) and is
    attended to via cross-attention.
    """

    def __init__(self, feature_dim: int, d_model: int = 64, heads: int = 4,
                 layers: int = 2, max_frames: int = 256):
        super().__init__()
        self.feature_dim = feature_dim
        self.d_model = d_model
        self.input_proj = nn.Linear(feature_dim, d_model)
        self.cond_proj = nn.Linear(2 * feature_dim, d_model)
        self.time_embed = nn.Sequential(
            _SinusoidalEmbedding(d_model), nn.Linear(d_model, d_model), nn.SiLU(),
            nn.Linear(d_model, d_model))
        self.pos = nn.Parameter(torch.zeros(max_frames, d_model))
        nn.init.normal_(self.pos, std=0.02)
        layer = nn.TransformerDecoderLayer(d_model, heads, dim_feedforward=4 * d_model,
                                           batch_first=True, norm_first=True)
        self.decoder = nn.TransformerDecoder(layer, layers)
        self.out_proj = nn.Linear(d_model, feature_dim)

    def forward(self, x: torch.Tensor, cond: torch.Tensor, t: torch.Tensor,
                mask: torch.Tensor) -> torch.Tensor:
        n = x.shape[1]
        temb = self.time_embed(t)[:, None, :]
        tgt = self.input_proj(x) + self.pos[:n][None] + temb
        mem = self.cond_proj(torch.cat([cond, mask], dim=-1)) + self.pos[:n][None] + temb
        return self.out_proj(self.decoder(tgt, mem))


class TorchDenoiserAdapter:
    """Exposes a torch denoiser through the numpy single-clip call protocol."""

    def __init__(self, module: nn.Module):
        self.module = module

    def __call__(self, x: np.ndarray, cond: np.ndarray, t: int,
                 mask: np.ndarray) -> np.ndarray:
        self.module.eval()
        with torch.no_grad():
            out = self.module(
                torch.as_tensor(x, dtype=torch.float32)[None],
                torch.as_tensor(cond, dtype=torch.float32)[None],
                torch.as_tensor([t]),
                torch.as_tensor(mask, dtype=torch.float32)[None],
            )
        return out[0].numpy().astype(float)
