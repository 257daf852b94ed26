"""Unit-quaternion utilities.

Convention: quaternions are length-4 numpy arrays [w, x, y, z], scalar first.
World up is +y; the character's rest facing is +z.
"""

from __future__ import annotations

import numpy as np

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def normalize(q: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(q)
    if n == 0.0:
        raise ValueError("cannot normalize zero quaternion")
    return q / n


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def conjugate(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def rotate_vec(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    # q v q* with v as a pure quaternion, expanded to avoid two full products
    w = q[0]
    u = q[1:]
    return v + 2.0 * np.cross(u, np.cross(u, v) + w * v)


def from_axis_angle(axis: np.ndarray, angle_rad: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        raise ValueError("rotation axis must be non-zero")
    half = 0.5 * angle_rad
    q = np.empty(4)
    q[0] = np.cos(half)
    q[1:] = np.sin(half) * axis / n
    return q


def to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def from_matrix(m: np.ndarray) -> np.ndarray:
    # Shepperd's method: pick the largest diagonal combination for stability.
    t = np.trace(m)
    if t > 0:
        s = np.sqrt(t + 1.0) * 2
        q = np.array([0.25 * s,
                      (m[2, 1] - m[1, 2]) / s,
                      (m[0, 2] - m[2, 0]) / s,
                      (m[1, 0] - m[0, 1]) / s])
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2
        q = np.array([(m[2, 1] - m[1, 2]) / s,
                      0.25 * s,
                      (m[0, 1] + m[1, 0]) / s,
                      (m[0, 2] + m[2, 0]) / s])
    elif m[1, 1] > m[2, 2]:
        s = np.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2
        q = np.array([(m[0, 2] - m[2, 0]) / s,
                      (m[0, 1] + m[1, 0]) / s,
                      0.25 * s,
                      (m[1, 2] + m[2, 1]) / s])
    else:
        s = np.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2
        q = np.array([(m[1, 0] - m[0, 1]) / s,
                      (m[0, 2] + m[2, 0]) / s,
                      (m[1, 2] + m[2, 1]) / s,
                      0.25 * s])
    return normalize(q)


def slerp(a: np.ndarray, b: np.ndarray, u: float) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dot = float(np.dot(a, b))
    if dot < 0.0:
        b = -b
        dot = -dot
    if dot > 0.9995:
        return normalize(a + u * (b - a))
    theta = np.arccos(np.clip(dot, -1.0, 1.0))
    s = np.sin(theta)
    return (np.sin((1.0 - u) * theta) / s) * a + (np.sin(u * theta) / s) * b


def yaw_twist(q: np.ndarray) -> np.ndarray:
    """Swing-twist decomposition about world up (+y); returns the twist (yaw) part."""
    w, _, y, _ = q
    n = np.hypot(w, y)
    if n < 1e-12:
        return IDENTITY.copy()
    return np.array([w / n, 0.0, y / n, 0.0])


def yaw_angle(q: np.ndarray) -> float:
    t = yaw_twist(q)
    ang = 2.0 * np.arctan2(t[2], t[0])
    return float(ang)


def from_yaw(angle_rad: float) -> np.ndarray:
    return np.array([np.cos(0.5 * angle_rad), 0.0, np.sin(0.5 * angle_rad), 0.0])


def to_euler_zxy(q: np.ndarray) -> tuple[float, float, float]:
    """Decompose q = Rz(z) Rx(x) Ry(y); returns (z, x, y) in radians (BVH ZXY order)."""
    m = to_matrix(q)
    # m = Rz Rx Ry; m[2,1] = sin(x)
    x = np.arcsin(np.clip(m[2, 1], -1.0, 1.0))
    if abs(m[2, 1]) < 0.9999999:
        z = np.arctan2(-m[0, 1], m[1, 1])
        y = np.arctan2(-m[2, 0], m[2, 2])
    else:
        # gimbal lock: fold everything into z
        z = np.arctan2(m[1, 0], m[0, 0])
        y = 0.0
    return float(z), float(x), float(y)


def from_euler_zxy(z: float, x: float, y: float) -> np.ndarray:
    qz = from_axis_angle(np.array([0.0, 0.0, 1.0]), z)
    qx = from_axis_angle(np.array([1.0, 0.0, 0.0]), x)
    qy = from_axis_angle(np.array([0.0, 1.0, 0.0]), y)
    return multiply(qz, multiply(qx, qy))
