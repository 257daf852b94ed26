/** Studio application: session lifecycle, playback, and the edit panel. */

import { ApiClient, ApiError, type EditResponse } from "./api.js";
import { validateClip, type ClipDoc } from "./fk.js";
import { Player } from "./player.js";
import {
  defaultCamera,
  drawGround,
  drawSkeleton,
  EDITED_STYLE,
  SOURCE_STYLE,
  type Camera,
} from "./renderer.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

class Studio {
  private readonly api = new ApiClient("");
  private sessionId: string | null = null;
  private source: ClipDoc | null = null;
  private edited: ClipDoc | null = null;
  private player = new Player(1, 24);
  private camera: Camera;
  private touched = new Set<string>();
  private lastTimestamp = 0;

  private readonly canvas = el<HTMLCanvasElement>("viewport");
  private readonly ctx = this.canvas.getContext("2d")!;
  private readonly scrub = el<HTMLInputElement>("scrub");
  private readonly frameLabel = el<HTMLSpanElement>("frame-label");
  private readonly instruction = el<HTMLTextAreaElement>("instruction");
  private readonly errorPane = el<HTMLDivElement>("error-pane");
  private readonly historyList = el<HTMLUListElement>("history");
  private readonly programText = el<HTMLDivElement>("program");
  private readonly overlayToggle = el<HTMLInputElement>("overlay-source");

  constructor() {
    this.camera = defaultCamera(this.canvas.width, this.canvas.height);
    this.wire();
    requestAnimationFrame((ts) => this.frameLoop(ts));
  }

  private wire(): void {
    el<HTMLInputElement>("clip-file").addEventListener("change", (e) => {
      const input = e.target as HTMLInputElement;
      const file = input.files?.[0];
      if (file) void this.loadClipFile(file);
    });
    el<HTMLButtonElement>("submit").addEventListener("click", () => {
      void this.submit();
    });
    this.instruction.addEventListener("keydown", (e) => {
      if (e.key === "Enter" && (e.ctrlKey || e.metaKey)) void this.submit();
    });
    el<HTMLButtonElement>("undo").addEventListener("click", () => {
      void this.undo();
    });
    el<HTMLButtonElement>("play").addEventListener("click", () => {
      this.player.toggle();
    });
    el<HTMLInputElement>("loop").addEventListener("change", (e) => {
      this.player.loop = (e.target as HTMLInputElement).checked;
    });
    this.scrub.addEventListener("input", () => {
      this.player.scrub(Number(this.scrub.value));
    });
    el<HTMLInputElement>("orbit").addEventListener("input", (e) => {
      this.camera.yawRad =
        (Number((e.target as HTMLInputElement).value) * Math.PI) / 180;
    });
  }

  private async loadClipFile(file: File): Promise<void> {
    try {
      const doc = JSON.parse(await file.text()) as ClipDoc;
      validateClip(doc);
      const description = el<HTMLInputElement>("source-description").value;
      const summary = await this.api.createSession(doc, description);
      this.sessionId = summary.id;
      this.source = doc;
      this.edited = doc;
      this.touched = new Set();
      this.player = new Player(doc.frames.length, doc.fps);
      this.scrub.max = String(doc.frames.length - 1);
      this.scrub.value = "0";
      this.historyList.replaceChildren();
      this.programText.textContent = "(no edits yet)";
      this.setError(null);
      el<HTMLSpanElement>("session-label").textContent =
        `session ${summary.id} — ${summary.frames} frames @ ${summary.fps} fps`;
    } catch (err) {
      this.setError(err);
    }
  }

  private async submit(): Promise<void> {
    if (!this.sessionId) {
      this.setError("load a clip first");
      return;
    }
    const text = this.instruction.value.trim();
    if (!text) return;
    try {
      const response = await this.api.submitEdit(this.sessionId, text);
      this.edited = await this.api.getClip(this.sessionId, "edited");
      this.touched = new Set(response.report.touched_joints);
      this.appendTurn(response);
      this.programText.textContent = response.program;
      this.instruction.value = ""; // only cleared on success
      this.setError(null);
    } catch (err) {
      // the instruction stays in the box so it can be rephrased
      this.setError(err);
    }
  }

  private async undo(): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.api.undo(this.sessionId);
      this.edited = await this.api.getClip(this.sessionId, "edited");
      this.historyList.lastElementChild?.remove();
      const turns = (await this.api.getHistory(this.sessionId)).turns;
      this.programText.textContent =
        turns.length > 0 ? turns[turns.length - 1].program : "(no edits yet)";
      this.touched = new Set(
        turns.length > 0 ? turns[turns.length - 1].report.touched_joints : [],
      );
      this.setError(null);
    } catch (err) {
      this.setError(err);
    }
  }

  private appendTurn(turn: EditResponse): void {
    const item = document.createElement("li");
    const head = document.createElement("div");
    head.className = "turn-instruction";
    head.textContent = turn.instruction;
    const program = document.createElement("code");
    program.textContent = turn.program;
    const trace = document.createElement("ul");
    trace.className = "trace";
    for (const node of turn.node_trace) {
      const line = document.createElement("li");
      line.textContent = `${node.node}: ${node.justification}`;
      trace.append(line);
    }
    item.append(head, program, trace);
    this.historyList.append(item);
  }

  private setError(err: unknown): void {
    if (err === null) {
      this.errorPane.textContent = "";
      this.errorPane.hidden = true;
      return;
    }
    let message: string;
    if (err instanceof ApiError) {
      const detail = err.detail as any;
      message =
        typeof detail === "object" && detail?.transcript
          ? `agent failed after retries:\n${detail.transcript.join("\n---\n")}`
          : `error ${err.status}: ${err.message}`;
    } else {
      message = String(err instanceof Error ? err.message : err);
    }
    this.errorPane.textContent = message;
    this.errorPane.hidden = false;
  }

  private frameLoop(timestamp: number): void {
    const dt = this.lastTimestamp ? (timestamp - this.lastTimestamp) / 1000 : 0;
    this.lastTimestamp = timestamp;
    const frame = this.player.tick(dt);
    if (!this.scrub.matches(":active")) this.scrub.value = String(frame);
    this.frameLabel.textContent = `${frame} / ${this.player.frameCount - 1}`;
    this.draw(frame);
    requestAnimationFrame((ts) => this.frameLoop(ts));
  }

  private draw(frame: number): void {
    const { width, height } = this.canvas;
    this.ctx.clearRect(0, 0, width, height);
    drawGround(this.ctx, this.camera);
    if (this.source && this.overlayToggle.checked) {
      drawSkeleton(this.ctx, this.camera, this.source, frame, SOURCE_STYLE);
    }
    if (this.edited) {
      drawSkeleton(this.ctx, this.camera, this.edited, frame, {
        ...EDITED_STYLE,
        highlight: this.touched,
      });
    }
  }
}

new Studio();
