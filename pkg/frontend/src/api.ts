/** Typed client for the blocktalk HTTP/WebSocket API. */

export interface BlockView {
  name: string;
  color: string;
  position: [number, number, number];
}

export interface SceneView {
  token: string;
  side: number;
  table: [number, number];
  blocks: BlockView[];
}

export interface TimeView {
  token: string;
  clock: number;
  phase: number;
}

export interface MoveView {
  block: string;
  from: [number, number, number];
  to: [number, number, number];
  token: string;
}

export interface SessionEventView {
  seq: number;
  clock: number;
  kind: "move" | "ask" | "answer" | "noise" | "error";
  payload: Record<string, unknown>;
}

export interface HistoryView {
  times: TimeView[];
  moves: MoveView[];
  events: SessionEventView[];
  world: unknown;
}

export interface AskResult {
  answer: string;
  ulf?: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function toJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = (await res.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

export class ApiClient {
  constructor(
    readonly base = "",
    private readonly fetchFn: typeof fetch = (...a) => fetch(...a),
  ) {}

  scene(at?: string): Promise<SceneView> {
    const query = at ? `?at=${encodeURIComponent(at)}` : "";
    return this.fetchFn(`${this.base}/api/scene${query}`).then((r) =>
      toJson<SceneView>(r),
    );
  }

  move(
    block: string,
    to: [number, number, number],
  ): Promise<{ ok: boolean; noise?: boolean; token?: string }> {
    return this.fetchFn(`${this.base}/api/move`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ block, to }),
    }).then((r) => toJson(r));
  }

  ask(text: string): Promise<AskResult> {
    return this.fetchFn(`${this.base}/api/ask`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    }).then((r) => toJson<AskResult>(r));
  }

  history(): Promise<HistoryView> {
    return this.fetchFn(`${this.base}/api/history`).then((r) =>
      toJson<HistoryView>(r),
    );
  }

  /** Open the live event stream; `base` may be "" for same-origin. */
  events(onEvent: (ev: SessionEventView) => void): WebSocket {
    const origin =
      this.base || (typeof location !== "undefined" ? location.origin : "");
    const ws = new WebSocket(
      origin.replace(/^http/, "ws") + "/api/events",
    );
    ws.onmessage = (m) => onEvent(JSON.parse(m.data as string));
    return ws;
  }
}
