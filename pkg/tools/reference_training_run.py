"""Reference training run: commits the held-out loss threshold.

Trains the toy denoiser with the committed recipe, scores it and the
context-mean baseline on the held-out corpus, and writes
tests/data/training_threshold.json. Re-run after any change to the model,
schedule, corpus generator, or evaluation protocol:

    python3 tools/reference_training_run.py [steps]
"""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path

from meo.infill.benchmark import (
    HELDOUT_CORPUS, TRAIN_W, baseline_loss, evaluation_cases, held_out_loss,
    model_predictor, train_toy_model,
)
from meo.infill.dataset import generate_corpus


def main():
    steps = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    t0 = time.time()
    model, losses, schedule = train_toy_model(steps, seed=0)
    train_time = time.time() - t0

    heldout = generate_corpus(*HELDOUT_CORPUS)
    cases = evaluation_cases(heldout, schedule, TRAIN_W, seed=99)
    model_loss = held_out_loss(model_predictor(model), cases)
    base_loss = baseline_loss(cases)

    # the commit threshold sits halfway between the reference model and the
    # baseline, so ordinary run-to-run variance cannot flip the comparison
    threshold = 0.5 * (model_loss + base_loss)
    doc = {
        "steps": steps,
        "train_seed": 0,
        "eval_seed": 99,
        "reference_model_loss": model_loss,
        "baseline_loss": base_loss,
        "threshold": threshold,
        "final_training_loss": losses[-1],
        "train_seconds": round(train_time, 1),
    }
    out = Path(__file__).resolve().parent.parent / "tests" / "data"
    out.mkdir(parents=True, exist_ok=True)
    path = out / "training_threshold.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(json.dumps(doc, indent=2, sort_keys=True))
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
