import numpy as np
import pytest

from meo import quat
from meo.motion import (
    MotionClip, MotionError, Pose, compose_root_trajectory,
    extract_root_trajectory, fk_pose, fk_world_rotations, forward_kinematics,
    joint_trajectory, rest_pose,
)
from meo.skeleton import (
    EDITABLE_JOINTS, JointSpec, ROOT_NAME, Skeleton, default_skeleton,
)

from conftest import random_clip, random_pose


def fk_oracle(skeleton, pose):
    """Independent FK: explicit world-matrix chain per joint."""
    world = {}
    positions = {}
    for j in skeleton.joints:
        local = quat.to_matrix(pose.joint_rotations[j.name])
        if j.parent is None:
            world[j.name] = local
            positions[j.name] = np.asarray(pose.root_translation, dtype=float)
        else:
            positions[j.name] = positions[j.parent] + world[j.parent] @ np.asarray(j.offset)
            world[j.name] = world[j.parent] @ local
    return positions


class TestSkeleton:
    def test_default_skeleton_shape(self, skeleton):
        assert len(skeleton.joints) == 19
        assert skeleton.joints[0].name == ROOT_NAME
        assert len(EDITABLE_JOINTS) == 14
        assert set(EDITABLE_JOINTS) <= set(skeleton.joint_names)

    def test_parents_precede_children(self, skeleton):
        seen = set()
        for j in skeleton.joints:
            if j.parent is not None:
                assert j.parent in seen
            seen.add(j.name)

    def test_single_root_enforced(self):
        with pytest.raises(ValueError):
            Skeleton((JointSpec("a", None, (0, 0, 0)),
                      JointSpec("b", None, (0, 1, 0))))

    def test_unknown_parent_rejected(self):
        with pytest.raises(ValueError):
            Skeleton((JointSpec("waist", None, (0, 0, 0)),
                      JointSpec("x", "nope", (0, 1, 0))))

    def test_left_right_mirror(self, skeleton):
        by_name = {j.name: j for j in skeleton.joints}
        for name, j in by_name.items():
            if name.startswith("left_"):
                r = by_name["right_" + name[5:]]
                assert np.allclose(np.asarray(j.offset) * [-1, 1, 1], r.offset)


class TestPose:
    def test_non_unit_quaternion_rejected(self, skeleton):
        rots = {n: np.array([1.0, 0, 0, 0]) for n in skeleton.joint_names}
        rots["waist"] = np.array([2.0, 0, 0, 0])
        with pytest.raises(MotionError):
            Pose(np.zeros(3), rots)

    def test_bad_root_rejected(self, skeleton):
        rots = {n: np.array([1.0, 0, 0, 0]) for n in skeleton.joint_names}
        with pytest.raises(MotionError):
            Pose(np.array([np.nan, 0, 0]), rots)

    def test_frozen_arrays(self, skeleton):
        pose = rest_pose(skeleton)
        with pytest.raises(ValueError):
            pose.root_translation[0] = 5.0


class TestFK:
    def test_rest_pose_positions(self, skeleton):
        pos = fk_pose(skeleton, rest_pose(skeleton))
        assert np.allclose(pos["waist"], [0, 0, 0])
        # spine chain stacks straight up from the waist
        assert np.allclose(pos["head"], [0, 0.15 * 3 + 0.10, 0])
        # left/right symmetry about the sagittal plane
        for left in ("left_hand", "left_foot", "left_elbow", "left_knee"):
            right = "right_" + left[5:]
            assert np.allclose(pos[left] * [-1, 1, 1], pos[right], atol=1e-12)

    def test_fk_matches_matrix_chain_oracle(self, skeleton, rng):
        for _ in range(50):
            pose = random_pose(skeleton, rng)
            got = fk_pose(skeleton, pose)
            want = fk_oracle(skeleton, pose)
            for name in skeleton.joint_names:
                assert np.allclose(got[name], want[name], atol=1e-10), name

    def test_world_rotations_consistent_with_positions(self, skeleton, rng):
        pose = random_pose(skeleton, rng)
        world = fk_world_rotations(skeleton, pose)
        pos = fk_pose(skeleton, pose)
        by_name = {j.name: j for j in skeleton.joints}
        for j in skeleton.joints:
            if j.parent is None:
                continue
            expected = pos[j.parent] + quat.rotate_vec(world[j.parent],
                                                       np.asarray(j.offset))
            assert np.allclose(pos[j.name], expected, atol=1e-10)
        del by_name

    def test_joint_trajectory_shape(self, skeleton, rng):
        clip = random_clip(skeleton, rng, n_frames=17)
        traj = joint_trajectory(clip, "right_hand")
        assert traj.shape == (17, 3)
        assert np.allclose(traj[3], forward_kinematics(clip, 3)["right_hand"])


class TestRootTrajectory:
    def test_extract_compose_identity_bitwise(self, skeleton, rng):
        clip = random_clip(skeleton, rng)
        back = compose_root_trajectory(clip, extract_root_trajectory(clip))
        for a, b in zip(clip.frames, back.frames):
            assert a.root_translation.tobytes() == b.root_translation.tobytes()
            for name in skeleton.joint_names:
                assert (a.joint_rotations[name].tobytes()
                        == b.joint_rotations[name].tobytes())

    def test_compose_applies_new_translation(self, skeleton, rng):
        clip = random_clip(skeleton, rng, n_frames=8)
        traj = extract_root_trajectory(clip)
        shifted = type(traj)(
            translations=tuple(t + np.array([1.0, 0, 0]) for t in traj.translations),
            yaw_rotations=traj.yaw_rotations)
        out = compose_root_trajectory(clip, shifted)
        for i in range(8):
            assert np.allclose(out.frames[i].root_translation,
                               clip.frames[i].root_translation + [1.0, 0, 0])

    def test_compose_applies_new_yaw(self, skeleton, rng):
        clip = random_clip(skeleton, rng, n_frames=6)
        traj = extract_root_trajectory(clip)
        delta = quat.from_yaw(0.7)
        turned = type(traj)(
            translations=traj.translations,
            yaw_rotations=tuple(quat.normalize(quat.multiply(delta, q))
                                for q in traj.yaw_rotations))
        out = compose_root_trajectory(clip, turned)
        for i in range(6):
            got = quat.yaw_angle(out.frames[i].joint_rotations[ROOT_NAME])
            want = quat.yaw_angle(quat.multiply(
                delta, extract_root_trajectory(clip).yaw_rotations[i]))
            assert abs(got - want) < 1e-9 or abs(abs(got - want) - 2 * np.pi) < 1e-9


class TestMotionClip:
    def test_empty_rejected(self, skeleton):
        with pytest.raises(MotionError):
            MotionClip(skeleton, tuple(), 24)

    def test_bad_fps_rejected(self, skeleton):
        pose = rest_pose(skeleton)
        with pytest.raises(MotionError):
            MotionClip(skeleton, (pose,), 0)

    def test_with_frame_replaces_one(self, skeleton, rng):
        clip = random_clip(skeleton, rng, n_frames=5)
        new = rest_pose(skeleton)
        out = clip.with_frame(2, new)
        assert out.frames[2] is new
        assert out.frames[1] is clip.frames[1]
