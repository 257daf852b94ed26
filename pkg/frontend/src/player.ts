/** Playback state machine: play/pause, scrubbing, looping. Pure logic so it
 * can be driven by requestAnimationFrame in the app and by fake clocks in
 * tests. */

export class Player {
  private timeS = 0;
  private playing = false;
  loop = true;

  constructor(
    public frameCount: number,
    public fps: number,
  ) {
    if (frameCount < 1 || fps <= 0) {
      throw new RangeError("frameCount must be >= 1 and fps > 0");
    }
  }

  get frame(): number {
    return Math.min(this.frameCount - 1, Math.floor(this.timeS * this.fps));
  }

  get isPlaying(): boolean {
    return this.playing;
  }

  play(): void {
    if (this.frameCount > 1) {
      // restart from the top when play is hit at the last frame
      if (!this.loop && this.frame === this.frameCount - 1) {
        this.timeS = 0;
      }
      this.playing = true;
    }
  }

  pause(): void {
    this.playing = false;
  }

  toggle(): void {
    this.playing ? this.pause() : this.play();
  }

  /** Jump to a frame (clamped); scrubbing pauses playback. */
  scrub(frame: number): void {
    const clamped = Math.max(0, Math.min(this.frameCount - 1, frame));
    this.timeS = clamped / this.fps;
    this.playing = false;
  }

  /** Advance the clock; returns the current frame index. */
  tick(dtS: number): number {
    if (this.playing && dtS > 0) {
      this.timeS += dtS;
      const durationS = this.frameCount / this.fps;
      if (this.timeS >= durationS) {
        if (this.loop) {
          this.timeS %= durationS;
        } else {
          this.timeS = (this.frameCount - 1) / this.fps;
          this.playing = false;
        }
      }
    }
    return this.frame;
  }

  /** Re-target a different clip length, keeping the position when possible. */
  reset(frameCount: number, fps: number): void {
    this.frameCount = frameCount;
    this.fps = fps;
    this.timeS = Math.min(this.timeS, (frameCount - 1) / fps);
    this.playing = false;
  }
}
