/** Canvas skeleton renderer with a fixed orbit camera.
 *
 * The projection is a plain rotate-then-orthographic map so the maths stays
 * testable without a canvas; world up (+y) is screen up.
 */

import {
  boneSegments,
  forwardKinematics,
  type ClipDoc,
  type Vec3,
} from "./fk.js";

export interface Camera {
  yawRad: number; // orbit angle around +y
  scale: number; // pixels per metre
  centerX: number; // canvas px of world origin
  centerY: number;
  heightOffset: number; // world metres added before projecting
}

export function defaultCamera(width: number, height: number): Camera {
  return {
    yawRad: Math.PI / 6,
    scale: Math.min(width, height) / 3.2,
    centerX: width / 2,
    centerY: height * 0.88,
    heightOffset: 0,
  };
}

export function project(camera: Camera, p: Vec3): [number, number] {
  const c = Math.cos(camera.yawRad);
  const s = Math.sin(camera.yawRad);
  const x = p[0] * c - p[2] * s;
  const y = p[1] + camera.heightOffset;
  return [camera.centerX + x * camera.scale, camera.centerY - y * camera.scale];
}

export interface DrawStyle {
  stroke: string;
  jointFill: string;
  lineWidth: number;
  highlight?: Set<string>;
  highlightFill?: string;
}

export const SOURCE_STYLE: DrawStyle = {
  stroke: "#9a9a9a",
  jointFill: "#bdbdbd",
  lineWidth: 2,
};

export const EDITED_STYLE: DrawStyle = {
  stroke: "#2d6cdf",
  jointFill: "#1b4db0",
  lineWidth: 3,
  highlightFill: "#e04343",
};

export function drawGround(
  ctx: CanvasRenderingContext2D,
  camera: Camera,
  extentM = 1.5,
): void {
  ctx.strokeStyle = "#e3e3e3";
  ctx.lineWidth = 1;
  for (let i = -3; i <= 3; i++) {
    const step = (extentM / 3) * i;
    const a = project(camera, [step, 0, -extentM]);
    const b = project(camera, [step, 0, extentM]);
    const c = project(camera, [-extentM, 0, step]);
    const d = project(camera, [extentM, 0, step]);
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.moveTo(c[0], c[1]);
    ctx.lineTo(d[0], d[1]);
    ctx.stroke();
  }
}

export function drawSkeleton(
  ctx: CanvasRenderingContext2D,
  camera: Camera,
  clip: ClipDoc,
  frame: number,
  style: DrawStyle,
): void {
  const positions = forwardKinematics(clip, frame);
  ctx.strokeStyle = style.stroke;
  ctx.lineWidth = style.lineWidth;
  for (const [parent, child] of boneSegments(clip.skeleton)) {
    const a = project(camera, positions.get(parent)!);
    const b = project(camera, positions.get(child)!);
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.stroke();
  }
  for (const joint of clip.skeleton) {
    const [x, y] = project(camera, positions.get(joint.name)!);
    const hot = style.highlight?.has(joint.name) ?? false;
    ctx.fillStyle = hot ? (style.highlightFill ?? style.jointFill) : style.jointFill;
    ctx.beginPath();
    ctx.arc(x, y, hot ? 5 : 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}
