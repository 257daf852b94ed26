"""End-to-end acceptance gate.

Each test covers one release criterion, checks the stated tolerances, enforces
its time budget, and prints a PASS/FAIL line (run with ``pytest -s`` to see the
lines as they complete).
"""

import json
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from meo import quat
from meo.inducer import EditPrompt, ReplayBackend, SessionHistory, induce
from meo.inducer.nodes import Node
from meo.inducer.replay_fixtures import SQUAT_CONTEXT, SQUAT_INSTRUCTION
from meo.infill.benchmark import (
    HELDOUT_CORPUS, TRAIN_W, baseline_loss, evaluation_cases, held_out_loss,
    model_predictor, train_toy_model,
)
from meo.infill.condition import build_condition
from meo.infill.dataset import generate_corpus, squat_fixture
from meo.infill.diffusion import noise_sample
from meo.infill.engine import EngineConfig, VARIANTS, execute_program
from meo.infill.schedule import cosine_schedule, lambda_blend
from meo.infill.spline import root_spline, spline_infill
from meo.infill.tensorize import clip_to_tensor, layout_for
from meo.keyframe.apply import execute_meo_keyframes
from meo.keyframe.ik import chain_for, fk_pose, solve_chain
from meo.keyframe.resolve import ExtremumUndefined, resolve_frame
from meo.keyframe.verbs import rotation_axis
from meo.lang.ast import (
    Explicit, ExplicitFrame, Extremum, Implicit, Index, JointConstraint,
    JointName, MEO, MEOProgram, Rotate, RotationVerb, TemporalRelation,
    Translate, TranslationDir,
)
from meo.lang.parser import parse_meo
from meo.lang.printer import print_meo
from meo.metrics import fidelity_test_for
from meo.service import SessionManager, clips_bitwise_equal, rebuild_session
from meo.skeleton import default_skeleton

from conftest import random_clip

FIXTURE_PATH = Path(__file__).resolve().parent.parent / "fixtures" / "llm_replay.json"
THRESHOLD_PATH = Path(__file__).resolve().parent / "data" / "training_threshold.json"


@contextmanager
def criterion(name, budget_s):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}", flush=True)
        raise
    elapsed = time.monotonic() - start
    verdict = "PASS" if elapsed <= budget_s else "FAIL"
    print(f"[{verdict}] {name}: {elapsed:.2f}s (budget {budget_s:.0f}s)",
          flush=True)
    assert elapsed <= budget_s, \
        f"{name}: {elapsed:.2f}s exceeded the {budget_s:.0f}s budget"


def poses_bitwise_equal(a, b):
    if a.root_translation.tobytes() != b.root_translation.tobytes():
        return False
    return all(a.joint_rotations[k].tobytes() == b.joint_rotations[k].tobytes()
               for k in a.joint_rotations)


def test_01_worked_example_offline():
    with criterion("worked example, replay backend", 1.0):
        backend = ReplayBackend(FIXTURE_PATH)
        result = induce(EditPrompt(SQUAT_INSTRUCTION, SQUAT_CONTEXT),
                        SessionHistory(), backend)
        d = result.decomposition
        assert d.e_ctx == "The character does a squat"
        assert d.e_goal == "Jump into the air"
        assert d.e_f == "At the bottom of the squat"
        assert d.subgoals[0].joint == "waist"
        assert result.node_trace[1].structured_output["answer"] == "specific moment"
        assert result.node_trace[2].structured_output["name"] == "when_waist_lowest"
        assert result.node_trace[4].structured_output["name"] == "move_waist_up"
        assert [nr.node for nr in result.node_trace] == [
            Node.ROOT, Node.TIME_PARSER, Node.TEMPORAL_LOOKUP,
            Node.JOINT_PARSER, Node.SPATIAL_LOOKUP]
        assert print_meo(result.program) == \
            "translate(waist, up) @ when(waist, lowest, at)"


def _random_op(rng, n_frames, w):
    joint = JointName(rng.choice([j.value for j in JointName]))
    if rng.random() < 0.5:
        verbs = [v for v in RotationVerb if rotation_axis(joint, v) is not None]
        kind = Rotate(RotationVerb(rng.choice([v.value for v in verbs])))
    else:
        kind = Translate(TranslationDir(
            rng.choice([d.value for d in TranslationDir])))
    frame = Index(int(rng.integers(w, n_frames - w)))
    return MEO(JointConstraint(joint, kind), frame)


def test_02_non_destructive_soak(skeleton):
    with criterion("non-destructiveness, 200 pairs x 3 variants", 120.0):
        rng = np.random.default_rng(20)
        n_frames, w = 30, 5
        for i in range(200):
            clip = random_clip(skeleton, rng, n_frames=n_frames)
            program = MEOProgram((_random_op(rng, n_frames, w),))
            outputs = {}
            for variant in VARIANTS:
                result = execute_program(clip, program,
                                         EngineConfig(variant=variant, seed=i))
                outputs[variant] = result
                edited = result.clip_edited
                for f in list(range(w)) + list(range(n_frames - w, n_frames)):
                    assert poses_bitwise_equal(edited.frames[f], clip.frames[f])
            # the edited keyframe itself is identical across all variants
            kf = outputs["interp"].report["keyframes"][0]
            for variant in VARIANTS[1:]:
                assert poses_bitwise_equal(
                    outputs[variant].clip_edited.frames[kf],
                    outputs["interp"].clip_edited.frames[kf])


def _random_ast_program(rng):
    ops = []
    for _ in range(int(rng.integers(1, 4))):
        joint = JointName(rng.choice([j.value for j in JointName]))
        if rng.random() < 0.5:
            mag = (None if rng.random() < 0.5
                   else float(round(rng.uniform(1.0, 180.0), 3)))
            kind = Rotate(RotationVerb(
                rng.choice([v.value for v in RotationVerb])), mag)
        else:
            rel = None
            if rng.random() < 0.3:
                others = [j for j in JointName if j is not joint]
                rel = JointName(rng.choice([j.value for j in others]))
            mag = (None if rng.random() < 0.5
                   else float(round(rng.uniform(0.01, 2.0), 4)))
            kind = Translate(TranslationDir(
                rng.choice([d.value for d in TranslationDir])), rel, mag)
        pick = rng.random()
        if pick < 0.3:
            frame = Explicit(ExplicitFrame(
                rng.choice([g.value for g in ExplicitFrame])))
        elif pick < 0.6:
            frame = Implicit(
                TemporalRelation(rng.choice([r.value for r in TemporalRelation])),
                JointName(rng.choice([j.value for j in JointName])),
                Extremum(rng.choice([e.value for e in Extremum])))
        else:
            frame = Index(int(rng.integers(0, 10_000)))
        ops.append(MEO(JointConstraint(joint, kind), frame))
    return MEOProgram(tuple(ops))


def test_03_parser_round_trip_soak():
    with criterion("10,000 program round trips", 10.0):
        rng = np.random.default_rng(30)
        for _ in range(10_000):
            program = _random_ast_program(rng)
            assert parse_meo(print_meo(program)) == program


def test_04_extremum_oracle_soak(skeleton):
    with criterion("extremum resolution vs oracle, 1,000 clips", 30.0):
        rng = np.random.default_rng(40)
        anchors = (JointName.RIGHT_HAND, JointName.LEFT_HAND, JointName.HEAD,
                   JointName.RIGHT_FOOT, JointName.LEFT_FOOT)
        for i in range(1_000):
            clip = random_clip(skeleton, rng, n_frames=12)
            joint = anchors[i % len(anchors)]
            positions = [fk_pose(skeleton, p) for p in clip.frames]
            height = np.array([pos[joint.value][1] for pos in positions])
            horiz = np.array([np.hypot(pos[joint.value][0] - p.root_translation[0],
                                       pos[joint.value][2] - p.root_translation[2])
                              for pos, p in zip(positions, clip.frames)])
            oracle = {Extremum.HIGHEST: int(np.argmax(height)),
                      Extremum.LOWEST: int(np.argmin(height)),
                      Extremum.FURTHEST: int(np.argmax(horiz)),
                      Extremum.CLOSEST: int(np.argmin(horiz))}
            values = {Extremum.HIGHEST: height, Extremum.LOWEST: height,
                      Extremum.FURTHEST: horiz, Extremum.CLOSEST: horiz}
            for extremum, want in oracle.items():
                series = values[extremum]
                try:
                    rf = resolve_frame(clip, Implicit(TemporalRelation.AT,
                                                      joint, extremum))
                except ExtremumUndefined:
                    assert series.max() - series.min() < 1e-9
                    continue
                assert rf.frame_index == want
                assert rf.anchor_value == pytest.approx(series[want], abs=1e-9)


def _reachable_target(skeleton, pose, chain, effector, rng, angle=0.5):
    rots = dict(pose.joint_rotations)
    for name in chain:
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        rots[name] = quat.normalize(quat.multiply(
            quat.from_axis_angle(axis, float(rng.normal(0, angle))), rots[name]))
    from meo.motion import Pose
    return fk_pose(skeleton, Pose(pose.root_translation, rots))[effector]


def test_05_ik_soak(skeleton):
    with criterion("IK, 1,000 reachable targets", 30.0):
        rng = np.random.default_rng(50)
        effectors = ("right_hand", "left_hand", "right_foot", "left_foot", "head")
        clip = random_clip(skeleton, rng, n_frames=8)
        failures = 0
        for i in range(1_000):
            effector = effectors[i % len(effectors)]
            chain = chain_for(effector)
            pose = clip.frames[i % len(clip.frames)]
            target = _reachable_target(skeleton, pose, chain, effector, rng)
            _, residual, _ = solve_chain(skeleton, pose, chain, effector, target)
            if residual > 1e-3:
                failures += 1
        assert failures == 0


def test_06_spline_continuity_soak(skeleton):
    with criterion("spline continuity, 500 random infills", 30.0):
        rng = np.random.default_rng(60)
        n_frames, w = 40, 5
        directions = [d.value for d in TranslationDir]
        for i in range(100):
            clip = random_clip(skeleton, rng, n_frames=n_frames)
            for _ in range(5):
                frame = int(rng.integers(w, n_frames - w))
                text = f"translate(waist, {rng.choice(directions)}) @ frame {frame}"
                keys = execute_meo_keyframes(clip, parse_meo(text)).keyframes
                out = spline_infill(clip, keys, w)
                # keyframe passage is exact (the pinned pose itself)
                assert out.frames[frame] is keys[0].pose
                spline = root_spline(clip, keys, w)
                assert np.allclose(spline.value(frame),
                                   keys[0].pose.root_translation, atol=1e-12)
                # root velocity is continuous across both context boundaries
                v_in = (clip.frames[w].root_translation
                        - clip.frames[w - 1].root_translation)
                jump_in = min(
                    np.abs(spline.derivative(float(w)) - v_in).max(),
                    np.abs(spline.derivative(float(w - 1)) - v_in).max())
                assert jump_in <= 1e-6
                tail = n_frames - w
                v_out = (clip.frames[tail].root_translation
                         - clip.frames[tail - 1].root_translation)
                jump_out = min(
                    np.abs(spline.derivative(float(tail)) - v_out).max(),
                    np.abs(spline.derivative(float(tail - 1)) - v_out).max())
                assert jump_out <= 1e-6


def test_07_diffusion_math(skeleton):
    with criterion("diffusion math: noising stats, blend weights, masks", 60.0):
        schedule = cosine_schedule()
        rng = np.random.default_rng(70)
        x = np.full(100, 2.0)
        for t in (1, 25, 50):
            a = schedule.alpha_bar(t)
            draws = np.stack([noise_sample(x, t, schedule, rng)
                              for _ in range(1_000)])
            n = draws.size  # 1e5 scalar draws
            se_mean = np.sqrt((1.0 - a) / n)
            assert abs(draws.mean() - np.sqrt(a) * 2.0) < 3 * se_mean
            se_var = (1.0 - a) * np.sqrt(2.0 / n)
            assert abs(draws.var() - (1.0 - a)) < 3 * se_var

        for steps in range(1, 1001):
            for t in range(1, steps + 1):
                assert lambda_blend(t, steps) == (t - 1) / steps

        clip = random_clip(skeleton, np.random.default_rng(71))
        keys = execute_meo_keyframes(
            clip, parse_meo("translate(waist, up) @ middle")).keyframes
        cond = build_condition(clip, keys, 5)
        m = cond.mask
        xt = clip_to_tensor(clip, layout_for(skeleton))
        assert np.array_equal(m * xt + (1 - m) * xt, xt)
        assert not (m * (1 - m)).any()
        assert set(np.unique(m)) <= {0.0, 1.0}


def test_08_toy_training_beats_baseline():
    with criterion("toy training beats context-mean baseline", 1200.0):
        committed = json.loads(THRESHOLD_PATH.read_text())
        model, losses, schedule = train_toy_model(committed["steps"],
                                                  seed=committed["train_seed"])
        heldout = generate_corpus(*HELDOUT_CORPUS)
        cases = evaluation_cases(heldout, schedule, TRAIN_W,
                                 seed=committed["eval_seed"])
        model_loss = held_out_loss(model_predictor(model), cases)
        base_loss = baseline_loss(cases)
        assert model_loss < committed["threshold"], \
            f"held-out loss {model_loss:.6f} above threshold"
        assert model_loss < base_loss


# (joint, direction) pairs whose default-magnitude target is geometrically out
# of reach for the joint's chain; the executor reports these as unreachable
# best-effort edits, so they are outside the supported editing envelope.
UNSUPPORTED_TRANSLATIONS = {
    ("right_elbow", "in"), ("right_elbow", "out"),
    ("left_elbow", "in"), ("left_elbow", "out"),
    ("right_hip", "out"), ("right_hip", "forward"),
    ("right_hip", "backward"), ("right_hip", "down"),
    ("left_hip", "out"), ("left_hip", "forward"),
    ("left_hip", "backward"), ("left_hip", "down"),
    ("right_knee", "forward"), ("right_knee", "down"),
    ("left_knee", "forward"), ("left_knee", "down"),
    ("right_shoulder", "in"), ("right_shoulder", "out"),
    ("right_shoulder", "forward"), ("right_shoulder", "backward"),
    ("right_shoulder", "up"), ("right_shoulder", "down"),
    ("left_shoulder", "in"), ("left_shoulder", "out"),
    ("left_shoulder", "forward"), ("left_shoulder", "backward"),
    ("left_shoulder", "up"), ("left_shoulder", "down"),
    ("right_hand", "out"), ("left_hand", "out"),
    ("head", "up"), ("head", "down"),
}


def _supported_suite():
    texts = []
    for joint in JointName:
        for verb in RotationVerb:
            if rotation_axis(joint, verb) is not None:
                texts.append(f"rotate({joint.value}, {verb.value}) @ middle")
    for joint in JointName:
        for direction in TranslationDir:
            if (joint.value, direction.value) in UNSUPPORTED_TRANSLATIONS:
                continue
            texts.append(f"translate({joint.value}, {direction.value}) @ middle")
    texts += [
        "translate(right_hand, up, of=head) @ middle",
        "translate(left_hand, up, of=head) @ middle",
        "translate(waist, up) @ frame 40",
        "translate(waist, up) @ when(waist, lowest, at)",
        "rotate(head, flex) @ entire_motion",
        "translate(waist, up) @ entire_motion",
    ]
    return texts


def test_09_fidelity_self_consistency():
    with criterion("fidelity self-consistency, default magnitudes", 60.0):
        clip = squat_fixture()
        suite = _supported_suite()
        passed = 0
        for text in suite:
            program = parse_meo(text)
            result = execute_program(clip, program, EngineConfig())
            ok = fidelity_test_for(program.ops[0]).evaluate(clip,
                                                            result.clip_edited)
            assert ok, f"fidelity self-test failed for: {text}"
            passed += 1
        assert passed == len(suite)
        assert passed / len(suite) == 1.0


def test_10_event_sourcing_replay(tmp_path):
    with criterion("event-sourced replay reproduces state bitwise", 60.0):
        from meo.clip_io import clip_to_doc
        from meo.inducer.replay_fixtures import build_default_fixtures

        backend = ReplayBackend(build_default_fixtures())
        manager = SessionManager(tmp_path, backend)
        session = manager.create(clip_to_doc(squat_fixture()), SQUAT_CONTEXT)
        manager.submit(session.id, SQUAT_INSTRUCTION)
        manager.undo(session.id)
        manager.submit(session.id, SQUAT_INSTRUCTION)
        assert manager.replay_check(session.id)

        events = manager.store.read(session.id)
        without_backend = rebuild_session(events)
        with_backend = rebuild_session(events, backend=backend)
        current = manager.get(session.id).current_clip
        assert clips_bitwise_equal(without_backend.current_clip, current)
        assert clips_bitwise_equal(with_backend.current_clip, current)
