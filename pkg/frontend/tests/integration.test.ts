/** End-to-end test against a real service process with the replay backend:
 * create a session, run the canned squat instruction, and check that the
 * client-side forward kinematics agrees with the server's debug endpoint.
 */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { forwardKinematics, validateClip, type ClipDoc } from "../src/fk.js";

const REPO_ROOT = resolve(dirname(fileURLToPath(import.meta.url)), "..", "..");
const PORT = 18000 + Math.floor(Math.random() * 10000);
const BASE = `http://127.0.0.1:${PORT}`;

const INSTRUCTION =
  "The character does a squat. At the bottom of the squat, jump into the air.";

let server: ChildProcess;
let dataDir: string;
let squatClip: ClipDoc;

async function waitForHealth(timeoutMs = 30_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const r = await fetch(`${BASE}/healthz`);
      if (r.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((resolveSleep) => setTimeout(resolveSleep, 200));
  }
  throw new Error("service did not become healthy in time");
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "meo-studio-test-"));
  squatClip = JSON.parse(
    execFileSync(
      "python3",
      [
        "-c",
        "import json; from meo.clip_io import clip_to_doc; " +
          "from meo.infill.dataset import squat_fixture; " +
          "print(json.dumps(clip_to_doc(squat_fixture())))",
      ],
      { cwd: REPO_ROOT, encoding: "utf-8" },
    ),
  ) as ClipDoc;
  server = spawn(
    "python3",
    [
      "-m",
      "meo.cli",
      "serve",
      "--port",
      String(PORT),
      "--llm-fixtures",
      join(REPO_ROOT, "fixtures", "llm_replay.json"),
      "--data-dir",
      dataDir,
    ],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  await waitForHealth();
}, 60_000);

afterAll(() => {
  server?.kill();
  rmSync(dataDir, { recursive: true, force: true });
});

describe("studio against a live service", () => {
  it("runs the squat edit and matches server-side FK", async () => {
    const api = new ApiClient(BASE);

    const summary = await api.createSession(
      squatClip,
      "The character does a squat.",
    );
    expect(summary.frames).toBe(60);

    const edit = await api.submitEdit(summary.id, INSTRUCTION);
    expect(edit.program).toBe(
      "translate(waist, up) @ when(waist, lowest, at)",
    );
    expect(edit.decomposition.subgoals[0].joint).toBe("waist");
    expect(edit.node_trace.map((n) => n.node)).toEqual([
      "root",
      "time_parser",
      "temporal_lookup",
      "joint_parser",
      "spatial_lookup",
    ]);
    expect(edit.history_length).toBe(1);

    const edited = await api.getClip(summary.id, "edited");
    validateClip(edited);
    const clientFk = forwardKinematics(edited, 0);
    const serverFk = await api.getFk(summary.id, 0, "edited");
    const names = Object.keys(serverFk.positions);
    expect(names.length).toBe(edited.skeleton.length);
    for (const name of names) {
      const mine = clientFk.get(name)!;
      const theirs = serverFk.positions[name];
      for (let axis = 0; axis < 3; axis++) {
        expect(Math.abs(mine[axis] - theirs[axis])).toBeLessThan(1e-4);
      }
    }

    // the history carries the turn and undo rolls the clip back to the source
    const history = await api.getHistory(summary.id);
    expect(history.turns.map((t) => t.program)).toEqual([edit.program]);
    await api.undo(summary.id);
    const restored = await api.getClip(summary.id, "edited");
    expect(restored).toEqual(await api.getClip(summary.id, "source"));
  }, 60_000);
});
