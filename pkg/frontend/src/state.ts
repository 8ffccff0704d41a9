/** Pure view-model logic: coordinate transforms, drag-drop targets,
 * and the timeline/ghost-view state. Everything here is testable without
 * a DOM or a server. */

import type { BlockView, SceneView, SessionEventView } from "./api.js";

export interface Viewport {
  width: number;
  height: number;
}

/** Table (x, y) in metres -> screen pixels, y up on the table = up on screen. */
export function tableToScreen(
  scene: SceneView,
  view: Viewport,
  x: number,
  y: number,
): [number, number] {
  const [tw, th] = scene.table;
  const scale = Math.min(view.width / tw, view.height / th);
  return [
    view.width / 2 + x * scale,
    view.height / 2 - y * scale,
  ];
}

export function screenToTable(
  scene: SceneView,
  view: Viewport,
  px: number,
  py: number,
): [number, number] {
  const [tw, th] = scene.table;
  const scale = Math.min(view.width / tw, view.height / th);
  return [
    (px - view.width / 2) / scale,
    (view.height / 2 - py) / scale,
  ];
}

export function clampToTable(scene: SceneView, x: number, y: number): [number, number] {
  const hx = scene.table[0] / 2 - scene.side / 2;
  const hy = scene.table[1] / 2 - scene.side / 2;
  return [Math.min(hx, Math.max(-hx, x)), Math.min(hy, Math.max(-hy, y))];
}

/** The topmost other block whose footprint contains (x, y), if any. */
export function blockAt(
  scene: SceneView,
  x: number,
  y: number,
  exclude?: string,
): BlockView | undefined {
  const hits = scene.blocks.filter(
    (b) =>
      b.name !== exclude &&
      Math.abs(b.position[0] - x) <= scene.side / 2 &&
      Math.abs(b.position[1] - y) <= scene.side / 2,
  );
  hits.sort((a, b) => b.position[2] - a.position[2]);
  return hits[0];
}

/** Where a dragged block should land if dropped at table point (x, y):
 * on top of the block under the cursor, or on the table surface. */
export function dropPosition(
  scene: SceneView,
  block: string,
  x: number,
  y: number,
): [number, number, number] {
  const target = blockAt(scene, x, y, block);
  if (target) {
    return [
      target.position[0],
      target.position[1],
      target.position[2] + scene.side,
    ];
  }
  const [cx, cy] = clampToTable(scene, x, y);
  return [cx, cy, scene.side / 2];
}

// ---- timeline -----------------------------------------------------------

export interface ChatLine {
  who: "user" | "engine";
  text: string;
}

export interface TimelineEntry {
  token: string;
  label: string;
  kind: "start" | "move";
}

export interface UiState {
  chat: ChatLine[];
  timeline: TimelineEntry[];
  /** Non-null while inspecting a past token (ghost view). */
  viewingToken: string | null;
}

export function initialState(): UiState {
  return {
    chat: [],
    timeline: [{ token: "|Now0|", label: "start", kind: "start" }],
    viewingToken: null,
  };
}

/** Fold one live session event into the UI state. */
export function applyEvent(state: UiState, ev: SessionEventView): UiState {
  switch (ev.kind) {
    case "ask":
      return {
        ...state,
        chat: [...state.chat, { who: "user", text: String(ev.payload.text) }],
      };
    case "answer":
      return {
        ...state,
        chat: [...state.chat, { who: "engine", text: String(ev.payload.text) }],
      };
    case "move": {
      const n = state.timeline.filter((t) => t.kind === "move").length + 1;
      const token = `|Now${2 * n}|`;
      return {
        ...state,
        timeline: [
          ...state.timeline,
          { token, label: `moved ${String(ev.payload.block)}`, kind: "move" },
        ],
      };
    }
    default:
      return state; // noise and error events don't change the timeline
  }
}

export function selectToken(state: UiState, token: string | null): UiState {
  const last = state.timeline[state.timeline.length - 1];
  // selecting the present again leaves ghost mode
  if (token === null || (last && token === last.token)) {
    return { ...state, viewingToken: null };
  }
  return { ...state, viewingToken: token };
}

export function isGhostView(state: UiState): boolean {
  return state.viewingToken !== null;
}
