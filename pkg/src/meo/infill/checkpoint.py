"""Denoiser checkpoint container.

Layout (little-endian):
  magic   8 bytes  b"MEOCKPT\\x01" (trailing byte is the format version)
  u32     header length in bytes
  header  UTF-8 JSON: {"layout": {"joint_names": [...]},
                       "schedule": {"alphas": [...]},
                       "model": {hyperparameters},
                       "tensors": [{"name": str, "shape": [...]}, ...]}
  blobs   float32 little-endian tensor data, in `tensors` order
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np
import torch

from .denoiser import ToyTransformerDenoiser
from .schedule import DiffusionSchedule
from .tensorize import FeatureLayout

MAGIC = b"MEOCKPT\x01"


class CheckpointError(ValueError):
    pass


def save_checkpoint(path, model: ToyTransformerDenoiser, schedule: DiffusionSchedule,
                    layout: FeatureLayout) -> None:
    state = model.state_dict()
    tensors = [{"name": k, "shape": list(v.shape)} for k, v in state.items()]
    header = json.dumps({
        "layout": {"joint_names": list(layout.joint_names)},
        "schedule": {"alphas": [float(a) for a in schedule.alphas]},
        "model": {
            "feature_dim": model.feature_dim,
            "d_model": model.d_model,
            "heads": model.decoder.layers[0].multihead_attn.num_heads,
            "layers": len(model.decoder.layers),
            "max_frames": model.pos.shape[0],
        },
        "tensors": tensors,
    }).encode()
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(header)))
        f.write(header)
        for k, _ in ((t["name"], t) for t in tensors):
            f.write(state[k].detach().cpu().numpy().astype("<f4").tobytes())


def load_checkpoint(path) -> tuple:
    """Returns (model, schedule, layout)."""
    data = Path(path).read_bytes()
    if data[:8] != MAGIC:
        raise CheckpointError("not a denoiser checkpoint (bad magic)")
    (hlen,) = struct.unpack_from("<I", data, 8)
    header = json.loads(data[12:12 + hlen].decode())
    hp = header["model"]
    model = ToyTransformerDenoiser(hp["feature_dim"], hp["d_model"], hp["heads"],
                                   hp["layers"], hp["max_frames"])
    offset = 12 + hlen
    state = {}
    for t in header["tensors"]:
        count = int(np.prod(t["shape"])) if t["shape"] else 1
        arr = np.frombuffer(data, dtype="<f4", count=count, offset=offset)
        offset += 4 * count
        state[t["name"]] = torch.as_tensor(arr.copy()).reshape(t["shape"])
    model.load_state_dict(state)
    schedule = DiffusionSchedule(np.array(header["schedule"]["alphas"]))
    layout = FeatureLayout(tuple(header["layout"]["joint_names"]))
    return model, schedule, layout
