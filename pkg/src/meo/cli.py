"""Command-line interface.

  meo serve    run the HTTP session service (optionally serving the studio UI)
  meo repl     interactive editing loop against a clip
  meo edit     one-shot natural-language edit of a clip file
  meo train    train the toy denoiser on a clip directory
  meo infill   execute an MEO program file against a clip
  meo eval     score edited clips against sources and programs
  meo dataset  materialize the seeded synthetic corpus as clip files
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

import click
import numpy as np

from .clip_io import clip_to_doc, load_clip, save_clip
from .inducer import HttpBackend, InductionError, ReplayBackend
from .inducer.backend import ENV_URL
from .infill.checkpoint import load_checkpoint, save_checkpoint
from .infill.dataset import generate_corpus
from .infill.denoiser import ToyTransformerDenoiser, TorchDenoiserAdapter
from .infill.diffusion import training_step
from .infill.engine import EngineConfig, VARIANTS, execute_program
from .infill.schedule import cosine_schedule
from .infill.tensorize import clip_to_tensor, layout_for
from .lang.parser import parse_meo
from .lang.printer import print_meo
from .lang.validate import validate_meo
from .metrics import fidelity_test_for, frechet_feature_distance, g_mpjpe
from .service import SessionManager, default_backend


def _backend_from(llm_fixtures):
    if llm_fixtures:
        return ReplayBackend(llm_fixtures)
    import os
    if os.environ.get(ENV_URL):
        return HttpBackend()
    return default_backend()


def _engine(variant: str, seed: int, ckpt) -> EngineConfig:
    config = EngineConfig(variant=variant, seed=seed)
    if ckpt:
        model, schedule, _layout = load_checkpoint(ckpt)
        config.schedule = schedule
        config.denoiser = TorchDenoiserAdapter(model)
    return config


def _load_clip_file(path) -> object:
    return load_clip(Path(path).read_bytes())


@click.group()
def main():
    """Natural-language character motion editing."""


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default=None, help="Session log directory "
              "(default: $MEO_DATA_DIR or ./meo-data).")
@click.option("--llm-fixtures", type=click.Path(exists=True), default=None,
              help="Replay-backend fixture file instead of a live endpoint.")
@click.option("--static-dir", type=click.Path(), default=None,
              help="Studio asset bundle to serve at /.")
@click.option("--engine", "variant", type=click.Choice(VARIANTS),
              default="interp", show_default=True)
def serve(port, host, data_dir, llm_fixtures, static_dir, variant):
    """Run the HTTP session service."""
    import uvicorn

    from .service import create_app
    app = create_app(data_dir=data_dir, backend=_backend_from(llm_fixtures),
                     engine=EngineConfig(variant=variant),
                     static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--clip", "clip_path", type=click.Path(exists=True), required=True)
@click.option("--ctx", default="", help="Text description of the source motion.")
@click.option("--llm-fixtures", type=click.Path(exists=True), default=None)
@click.option("--engine", "variant", type=click.Choice(VARIANTS),
              default="interp", show_default=True)
@click.option("--data-dir", default=None,
              help="Where to persist the session log (default: temp dir).")
def repl(clip_path, ctx, llm_fixtures, variant, data_dir):
    """Interactive editing loop. Commands: :undo, :save PATH, :program, :quit."""
    manager = SessionManager(data_dir or tempfile.mkdtemp(prefix="meo-repl-"),
                             _backend_from(llm_fixtures),
                             EngineConfig(variant=variant))
    clip = _load_clip_file(clip_path)
    session = manager.create(clip_to_doc(clip), ctx)
    click.echo(f"session {session.id} ({len(clip.frames)} frames @ {clip.fps} fps)")
    click.echo("type an instruction, or :undo / :save PATH / :program / :quit")
    while True:
        try:
            line = input("meo> ").strip()
        except (EOFError, KeyboardInterrupt):
            click.echo("")
            return
        if not line:
            continue
        if line in (":quit", ":q"):
            return
        if line == ":undo":
            try:
                manager.undo(session.id)
                click.echo("undone")
            except Exception as e:
                click.echo(f"error: {e}")
            continue
        if line == ":program":
            turns = manager.history(session.id)
            click.echo(turns[-1]["program"] if turns else "(no edits yet)")
            continue
        if line.startswith(":save"):
            out = line.split(None, 1)[1] if " " in line else "edited.json"
            Path(out).write_bytes(save_clip(manager.get(session.id).current_clip))
            click.echo(f"wrote {out}")
            continue
        try:
            response = manager.submit(session.id, line)
        except InductionError as e:
            click.echo(f"induction failed: {e}")
            continue
        except Exception as e:
            click.echo(f"error: {e}")
            continue
        click.echo(f"program: {response['program']}")
        for item in response["node_trace"]:
            click.echo(f"  [{item['node']}] {item['justification']}")


@main.command()
@click.option("--clip", "clip_path", type=click.Path(exists=True), required=True)
@click.option("--instruction", required=True)
@click.option("--ctx", default="")
@click.option("--out", type=click.Path(), required=True)
@click.option("--llm-fixtures", type=click.Path(exists=True), default=None)
@click.option("--engine", "variant", type=click.Choice(VARIANTS),
              default="interp", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--ckpt", type=click.Path(exists=True), default=None)
@click.option("--report", "report_dir", type=click.Path(), default=None,
              help="Directory for report.json, CSV tables and figures.")
def edit(clip_path, instruction, ctx, out, llm_fixtures, variant, seed, ckpt,
         report_dir):
    """One-shot edit: induce a program from INSTRUCTION and execute it."""
    from .inducer import EditPrompt, SessionHistory, induce

    clip = _load_clip_file(clip_path)
    backend = _backend_from(llm_fixtures)
    try:
        result = induce(EditPrompt(instruction, ctx), SessionHistory(), backend)
    except InductionError as e:
        raise click.ClickException(f"induction failed: {e}")
    diagnostics = validate_meo(result.program, clip)
    if diagnostics:
        raise click.ClickException("invalid program: " + "; ".join(diagnostics))
    execution = execute_program(clip, result.program,
                                _engine(variant, seed, ckpt))
    Path(out).write_bytes(save_clip(execution.clip_edited))
    click.echo(f"program: {print_meo(result.program)}")
    click.echo(f"wrote {out}")
    if report_dir:
        from .report import write_edit_report
        path = write_edit_report(report_dir, execution.report, clip,
                                 execution.clip_edited, execution.clip_spline)
        click.echo(f"report in {path}")


@main.command()
@click.option("--clip", "clip_path", type=click.Path(exists=True), required=True)
@click.option("--program", "program_path", type=click.Path(exists=True),
              required=True, help="MEO program text file.")
@click.option("--out", type=click.Path(), required=True)
@click.option("--engine", "variant", type=click.Choice(VARIANTS),
              default="interp", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--ckpt", type=click.Path(exists=True), default=None)
@click.option("--report", "report_dir", type=click.Path(), default=None)
def infill(clip_path, program_path, out, variant, seed, ckpt, report_dir):
    """Execute an MEO program file against a clip."""
    clip = _load_clip_file(clip_path)
    program = parse_meo(Path(program_path).read_text())
    diagnostics = validate_meo(program, clip)
    if diagnostics:
        raise click.ClickException("invalid program: " + "; ".join(diagnostics))
    execution = execute_program(clip, program, _engine(variant, seed, ckpt))
    Path(out).write_bytes(save_clip(execution.clip_edited))
    click.echo(f"wrote {out}")
    if report_dir:
        from .report import write_edit_report
        path = write_edit_report(report_dir, execution.report, clip,
                                 execution.clip_edited, execution.clip_spline)
        click.echo(f"report in {path}")


@main.command()
@click.option("--out", "out_dir", type=click.Path(), required=True)
@click.option("--count", default=200, show_default=True)
@click.option("--seed", default=7, show_default=True)
def dataset(out_dir, count, seed):
    """Write the seeded synthetic corpus as clip_NNNN.json files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, clip in enumerate(generate_corpus(count, seed)):
        (out / f"clip_{i:04d}.json").write_bytes(save_clip(clip))
    click.echo(f"wrote {count} clips to {out}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(exists=True), required=True)
@click.option("--steps", default=2000, show_default=True)
@click.option("--out", "ckpt_out", type=click.Path(), required=True)
@click.option("--batch", default=8, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--context-w", default=5, show_default=True)
@click.option("--report", "report_dir", type=click.Path(), default=None)
def train(data_dir, steps, ckpt_out, batch, seed, context_w, report_dir):
    """Train the toy denoiser on the clips in --data."""
    import torch

    paths = sorted(Path(data_dir).glob("*.json"))
    if not paths:
        raise click.ClickException(f"no clip files in {data_dir}")
    clips = [load_clip(p.read_bytes()) for p in paths]
    layout = layout_for(clips[0].skeleton)
    tensors = np.stack([clip_to_tensor(c, layout) for c in clips])

    rng = np.random.default_rng(seed)
    torch.manual_seed(seed)
    schedule = cosine_schedule()
    model = ToyTransformerDenoiser(layout.dim)
    optimizer = torch.optim.Adam(model.parameters(), lr=1e-3)
    root_slice = layout.group_slice("root")

    losses = []
    for step in range(1, steps + 1):
        idx = rng.integers(0, len(tensors), size=batch)
        loss = training_step(model, tensors[idx], schedule, context_w, rng,
                             optimizer, root_slice=root_slice)
        losses.append(loss)
        if step % 100 == 0 or step == steps:
            recent = float(np.mean(losses[-100:]))
            click.echo(f"step {step}/{steps}  loss {recent:.6f}")

    save_checkpoint(ckpt_out, model, schedule, layout)
    click.echo(f"wrote {ckpt_out}")
    if report_dir:
        from .report import write_training_report
        path = write_training_report(report_dir, losses)
        click.echo(f"report in {path}")


@main.command(name="eval")
@click.option("--source", "source_dir", type=click.Path(exists=True),
              required=True)
@click.option("--edited", "edited_dir", type=click.Path(exists=True),
              required=True)
@click.option("--programs", "programs_dir", type=click.Path(exists=True),
              required=True)
@click.option("--out", "report_dir", type=click.Path(), default=None,
              help="Directory for report.json, per_item.csv and figures.")
def eval_cmd(source_dir, edited_dir, programs_dir, report_dir):
    """Score edited clips: G-MPJPE, Fidelity-Auto, feature Frechet distance.

    Items are matched across the three directories by file stem
    (NAME.json / NAME.json / NAME.meo).
    """
    stems = sorted(p.stem for p in Path(source_dir).glob("*.json"))
    if not stems:
        raise click.ClickException(f"no clip files in {source_dir}")

    per_item, sources, editeds, fidelity_hits = [], [], [], []
    for stem in stems:
        src = _load_clip_file(Path(source_dir) / f"{stem}.json")
        edited_path = Path(edited_dir) / f"{stem}.json"
        program_path = Path(programs_dir) / f"{stem}.meo"
        if not edited_path.exists() or not program_path.exists():
            raise click.ClickException(f"missing edited clip or program for {stem}")
        edited = _load_clip_file(edited_path)
        program = parse_meo(program_path.read_text())
        dist = g_mpjpe(src, edited)
        passed = all(fidelity_test_for(meo).evaluate(src, edited)
                     for meo in program.ops)
        per_item.append({"item": stem, "g_mpjpe": dist, "fidelity": passed})
        sources.append(src)
        editeds.append(edited)
        fidelity_hits.append(passed)

    fid_g = (frechet_feature_distance(sources, editeds)
             if len(sources) >= 2 else None)
    report = {
        "g_mpjpe": float(np.mean([it["g_mpjpe"] for it in per_item])),
        "fidelity_auto": float(np.mean(fidelity_hits)),
        "fid_g": fid_g,
        "per_item": per_item,
    }
    click.echo(json.dumps(report, indent=2, sort_keys=True))
    if report_dir:
        from .report import write_eval_report
        path = write_eval_report(report_dir, report, sources, editeds)
        click.echo(f"report in {path}", err=True)


if __name__ == "__main__":
    sys.exit(main())
