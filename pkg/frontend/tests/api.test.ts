import { describe, expect, it, vi } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import type { ClipDoc } from "../src/fk.js";

const CLIP: ClipDoc = {
  fps: 24,
  skeleton: [{ name: "waist", parent: null, offset: [0, 0, 0] }],
  frames: [{ root: [0, 0, 0], rotations: { waist: [1, 0, 0, 0] } }],
};

function fetchReturning(status: number, payload: unknown) {
  return vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => payload,
  })) as unknown as typeof fetch;
}

describe("ApiClient", () => {
  it("posts the clip and description on session creation", async () => {
    const fetchImpl = fetchReturning(201, { id: "abc", frames: 1 });
    const client = new ApiClient("http://x", fetchImpl);
    const summary = await client.createSession(CLIP, "desc");
    expect(summary.id).toBe("abc");
    const [url, init] = (fetchImpl as any).mock.calls[0];
    expect(url).toBe("http://x/sessions");
    expect(init.method).toBe("POST");
    const body = JSON.parse(init.body);
    expect(body.clip).toEqual(CLIP);
    expect(body.source_description).toBe("desc");
    expect(body.engine).toBeUndefined();
  });

  it("builds clip and fk query strings", async () => {
    const fetchImpl = fetchReturning(200, {});
    const client = new ApiClient("", fetchImpl);
    await client.getClip("s1", "spline");
    await client.getFk("s1", 7, "source");
    const urls = (fetchImpl as any).mock.calls.map((c: any[]) => c[0]);
    expect(urls).toEqual([
      "/sessions/s1/clip?which=spline",
      "/sessions/s1/fk?which=source&frame=7",
    ]);
  });

  it("wraps failures in ApiError with the detail payload", async () => {
    const detail = { transcript: ["a", "b", "c"] };
    const client = new ApiClient("", fetchReturning(502, { detail }));
    await expect(client.submitEdit("s1", "x")).rejects.toSatisfy(
      (err: unknown) =>
        err instanceof ApiError &&
        err.status === 502 &&
        (err.detail as any).transcript.length === 3,
    );
  });

  it("surfaces string details as the error message", async () => {
    const client = new ApiClient("", fetchReturning(404, { detail: "unknown session" }));
    await expect(client.getHistory("nope")).rejects.toThrow("unknown session");
  });
});
