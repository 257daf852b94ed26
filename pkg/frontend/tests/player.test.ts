import { describe, expect, it } from "vitest";
import { Player } from "../src/player.js";

describe("Player", () => {
  it("advances one frame per 1/fps seconds while playing", () => {
    const p = new Player(60, 24);
    p.play();
    expect(p.tick(1 / 24)).toBe(1);
    expect(p.tick(1 / 24)).toBe(2);
    expect(p.tick(10 / 24)).toBe(12);
  });

  it("does not advance while paused", () => {
    const p = new Player(60, 24);
    expect(p.tick(1)).toBe(0);
    p.play();
    p.tick(0.5);
    p.pause();
    const frame = p.frame;
    expect(p.tick(5)).toBe(frame);
  });

  it("wraps around when looping", () => {
    const p = new Player(10, 10);
    p.loop = true;
    p.play();
    expect(p.tick(1.05)).toBe(0); // 10.5 frames -> wrapped to 0.5
    expect(p.isPlaying).toBe(true);
  });

  it("stops at the last frame when not looping", () => {
    const p = new Player(10, 10);
    p.loop = false;
    p.play();
    expect(p.tick(5)).toBe(9);
    expect(p.isPlaying).toBe(false);
  });

  it("play at the end restarts a non-looping clip", () => {
    const p = new Player(10, 10);
    p.loop = false;
    p.play();
    p.tick(5);
    p.play();
    expect(p.frame).toBe(0);
    expect(p.isPlaying).toBe(true);
  });

  it("scrubbing clamps and pauses", () => {
    const p = new Player(30, 24);
    p.play();
    p.scrub(99);
    expect(p.frame).toBe(29);
    expect(p.isPlaying).toBe(false);
    p.scrub(-5);
    expect(p.frame).toBe(0);
  });

  it("single-frame clips never play", () => {
    const p = new Player(1, 24);
    p.play();
    expect(p.isPlaying).toBe(false);
    expect(p.tick(1)).toBe(0);
  });

  it("reset keeps the position when still in range", () => {
    const p = new Player(60, 24);
    p.scrub(20);
    p.reset(30, 24);
    expect(p.frame).toBe(20);
    p.reset(10, 24);
    expect(p.frame).toBe(9);
  });

  it("rejects invalid construction", () => {
    expect(() => new Player(0, 24)).toThrow(RangeError);
    expect(() => new Player(10, 0)).toThrow(RangeError);
  });
});
