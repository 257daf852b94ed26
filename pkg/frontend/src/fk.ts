/** Clip document types and client-side forward kinematics.
 *
 * Mirrors the service's clip format: quaternions are [w, x, y, z], local to
 * the parent joint (the root's rotation is in world frame), offsets are the
 * rest-pose bone vectors in metres, world up is +y.
 */

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // [w, x, y, z]

export interface JointSpec {
  name: string;
  parent: string | null;
  offset: Vec3;
}

export interface FrameDoc {
  root: Vec3;
  rotations: Record<string, Quat>;
}

export interface ClipDoc {
  fps: number;
  skeleton: JointSpec[];
  frames: FrameDoc[];
}

export function quatMultiply(a: Quat, b: Quat): Quat {
  const [aw, ax, ay, az] = a;
  const [bw, bx, by, bz] = b;
  return [
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ];
}

export function quatRotateVec(q: Quat, v: Vec3): Vec3 {
  // q v q* with v as a pure quaternion: v + 2 u x (u x v + w v)
  const [w, ux, uy, uz] = q;
  const [vx, vy, vz] = v;
  const tx = uy * vz - uz * vy + w * vx;
  const ty = uz * vx - ux * vz + w * vy;
  const tz = ux * vy - uy * vx + w * vz;
  return [
    vx + 2 * (uy * tz - uz * ty),
    vy + 2 * (uz * tx - ux * tz),
    vz + 2 * (ux * ty - uy * tx),
  ];
}

export class ClipFormatError extends Error {}

/** Structural checks sufficient for rendering; the server stays authoritative. */
export function validateClip(doc: ClipDoc): void {
  if (!Number.isInteger(doc.fps) || doc.fps <= 0) {
    throw new ClipFormatError("fps must be a positive integer");
  }
  if (!Array.isArray(doc.skeleton) || doc.skeleton.length === 0) {
    throw new ClipFormatError("skeleton must be a non-empty joint list");
  }
  const seen = new Set<string>();
  let roots = 0;
  for (const joint of doc.skeleton) {
    if (joint.parent === null) {
      roots += 1;
    } else if (!seen.has(joint.parent)) {
      throw new ClipFormatError(
        `joint ${joint.name}: parent ${joint.parent} does not precede it`,
      );
    }
    seen.add(joint.name);
  }
  if (roots !== 1) {
    throw new ClipFormatError("skeleton must have exactly one root joint");
  }
  if (!Array.isArray(doc.frames) || doc.frames.length === 0) {
    throw new ClipFormatError("clip must have at least one frame");
  }
  doc.frames.forEach((frame, i) => {
    for (const joint of doc.skeleton) {
      const q = frame.rotations[joint.name];
      if (!q || q.length !== 4) {
        throw new ClipFormatError(
          `frames[${i}].rotations.${joint.name}: missing quaternion`,
        );
      }
      const n = Math.hypot(q[0], q[1], q[2], q[3]);
      if (Math.abs(n - 1) > 1e-3) {
        throw new ClipFormatError(
          `frames[${i}].rotations.${joint.name}: quaternion norm ${n.toFixed(6)}`,
        );
      }
    }
  });
}

/** World position of every joint at one frame. */
export function forwardKinematics(
  clip: ClipDoc,
  frameIndex: number,
): Map<string, Vec3> {
  if (frameIndex < 0 || frameIndex >= clip.frames.length) {
    throw new RangeError(
      `frame ${frameIndex} out of range 0..${clip.frames.length - 1}`,
    );
  }
  const frame = clip.frames[frameIndex];
  const positions = new Map<string, Vec3>();
  const worldRot = new Map<string, Quat>();
  for (const joint of clip.skeleton) {
    const local = frame.rotations[joint.name];
    if (joint.parent === null) {
      positions.set(joint.name, [...frame.root]);
      worldRot.set(joint.name, local);
    } else {
      const parentPos = positions.get(joint.parent)!;
      const parentRot = worldRot.get(joint.parent)!;
      const bone = quatRotateVec(parentRot, joint.offset);
      positions.set(joint.name, [
        parentPos[0] + bone[0],
        parentPos[1] + bone[1],
        parentPos[2] + bone[2],
      ]);
      worldRot.set(joint.name, quatMultiply(parentRot, local));
    }
  }
  return positions;
}

/** [parentName, childName] pairs for bone rendering. */
export function boneSegments(skeleton: JointSpec[]): Array<[string, string]> {
  return skeleton
    .filter((j) => j.parent !== null)
    .map((j) => [j.parent as string, j.name]);
}
