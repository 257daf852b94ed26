import numpy as np
import pytest

from meo import quat
from meo.motion import MotionClip, Pose, rest_pose
from meo.skeleton import default_skeleton


@pytest.fixture(scope="session")
def skeleton():
    return default_skeleton()


def random_pose(skeleton, rng, root_scale=0.3, angle_scale=0.6):
    rots = {}
    for name in skeleton.joint_names:
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        rots[name] = quat.from_axis_angle(axis, float(rng.normal(0, angle_scale)))
    root = np.array([0.0, 0.9, 0.0]) + rng.normal(0, root_scale, 3)
    return Pose(root, rots)


def random_clip(skeleton, rng, n_frames=60, fps=24, smooth=True):
    """Random but temporally smooth clip: slerp between a few random key poses."""
    n_keys = 4
    keys = [random_pose(skeleton, rng) for _ in range(n_keys)]
    frames = []
    for i in range(n_frames):
        u = 0.0 if n_frames == 1 else i / (n_frames - 1) * (n_keys - 1)
        k = min(int(u), n_keys - 2)
        s = u - k
        a, b = keys[k], keys[k + 1]
        if not smooth:
            frames.append(random_pose(skeleton, rng))
            continue
        rots = {name: quat.slerp(a.joint_rotations[name],
                                 b.joint_rotations[name], s)
                for name in skeleton.joint_names}
        root = (1 - s) * a.root_translation + s * b.root_translation
        frames.append(Pose(root, rots))
    return MotionClip(skeleton, tuple(frames), fps)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def rest_clip(skeleton):
    pose = rest_pose(skeleton)
    return MotionClip(skeleton, tuple(pose for _ in range(60)), 24)
