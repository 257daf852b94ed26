/** Typed client for the HTTP session API. */

import type { ClipDoc } from "./fk.js";

export interface EngineSettings {
  variant?: "interp" | "eng" | "eng-ss";
  context_w?: number;
  seed?: number;
}

export interface SessionSummary {
  id: string;
  source_description: string;
  engine: Record<string, unknown>;
  frames: number;
  fps: number;
  history_length: number;
  created: string;
  updated: string;
}

export interface NodeTraceItem {
  node: string;
  attempts: number;
  raw: string;
  justification: string;
}

export interface Subgoal {
  joint: string;
  sub_goal: string;
}

export interface EditResponse {
  instruction: string;
  program: string;
  decomposition: {
    e_ctx: string;
    e_goal: string;
    e_f: string | null;
    subgoals: Subgoal[];
  };
  node_trace: NodeTraceItem[];
  report: {
    engine_variant: string;
    keyframes: number[];
    touched_joints: string[];
    warnings: string[];
  };
  ts: string;
  history_length: number;
}

export interface FkResponse {
  frame: number;
  which: string;
  positions: Record<string, [number, number, number]>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : {},
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, (payload as any)?.detail ?? payload);
    }
    return payload as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  createSession(
    clip: ClipDoc,
    sourceDescription = "",
    engine?: EngineSettings,
  ): Promise<SessionSummary> {
    return this.request("POST", "/sessions", {
      clip,
      source_description: sourceDescription,
      ...(engine ? { engine } : {}),
    });
  }

  submitEdit(sessionId: string, instruction: string): Promise<EditResponse> {
    return this.request("POST", `/sessions/${sessionId}/edits`, {
      instruction,
    });
  }

  undo(sessionId: string): Promise<SessionSummary> {
    return this.request("POST", `/sessions/${sessionId}/undo`);
  }

  getClip(
    sessionId: string,
    which: "source" | "edited" | "spline" = "edited",
  ): Promise<ClipDoc> {
    return this.request("GET", `/sessions/${sessionId}/clip?which=${which}`);
  }

  getHistory(sessionId: string): Promise<{ turns: EditResponse[] }> {
    return this.request("GET", `/sessions/${sessionId}/history`);
  }

  getFk(
    sessionId: string,
    frame: number,
    which: "source" | "edited" | "spline" = "edited",
  ): Promise<FkResponse> {
    return this.request(
      "GET",
      `/sessions/${sessionId}/fk?which=${which}&frame=${frame}`,
    );
  }
}
