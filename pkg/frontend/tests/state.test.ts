import { describe, expect, it } from "vitest";

import type { SceneView, SessionEventView } from "../src/api.js";
import {
  applyEvent,
  blockAt,
  clampToTable,
  dropPosition,
  initialState,
  isGhostView,
  screenToTable,
  selectToken,
  tableToScreen,
} from "../src/state.js";

const scene: SceneView = {
  token: "|Now0|",
  side: 0.15,
  table: [1.5, 1.5],
  blocks: [
    { name: "Toyota", color: "red", position: [-0.225, -0.6, 0.075] },
    { name: "Texaco", color: "green", position: [0.075, -0.6, 0.075] },
    { name: "Twitter", color: "blue", position: [0.075, -0.6, 0.225] },
  ],
};

const view = { width: 600, height: 600 };

describe("coordinate transforms", () => {
  it("centre of the table maps to centre of the viewport", () => {
    expect(tableToScreen(scene, view, 0, 0)).toEqual([300, 300]);
  });

  it("table +y is screen up", () => {
    const [, py] = tableToScreen(scene, view, 0, 0.5);
    expect(py).toBeLessThan(300);
  });

  it("screenToTable inverts tableToScreen", () => {
    const [px, py] = tableToScreen(scene, view, -0.225, -0.6);
    const [x, y] = screenToTable(scene, view, px, py);
    expect(x).toBeCloseTo(-0.225, 10);
    expect(y).toBeCloseTo(-0.6, 10);
  });
});

describe("drop targets", () => {
  it("clamps to the table edge minus half a block", () => {
    expect(clampToTable(scene, 5, -5)).toEqual([0.675, -0.675]);
  });

  it("finds the topmost block under the cursor", () => {
    expect(blockAt(scene, 0.08, -0.58)?.name).toBe("Twitter");
    expect(blockAt(scene, 0.08, -0.58, "Twitter")?.name).toBe("Texaco");
    expect(blockAt(scene, 0.5, 0.5)).toBeUndefined();
  });

  it("dropping onto a block stacks one side-length higher", () => {
    const [x, y, z] = dropPosition(scene, "Toyota", 0.08, -0.58);
    expect([x, y]).toEqual([0.075, -0.6]);
    expect(z).toBeCloseTo(0.375, 10); // onto Twitter, the top of the stack
  });

  it("dropping onto empty table lands on the surface", () => {
    const [x, y, z] = dropPosition(scene, "Toyota", 0.3, 0.3);
    expect([x, y, z]).toEqual([0.3, 0.3, 0.075]);
  });

  it("a block is not its own drop target", () => {
    // Twitter sits on Texaco; dropping it there again lands on Texaco, not itself
    const [x, y, z] = dropPosition(scene, "Twitter", 0.08, -0.58);
    expect([x, y]).toEqual([0.075, -0.6]);
    expect(z).toBeCloseTo(0.225, 10);
  });
});

describe("timeline state", () => {
  const ev = (kind: SessionEventView["kind"], payload = {}): SessionEventView =>
    ({ seq: 0, clock: 0, kind, payload }) as SessionEventView;

  it("ask/answer events append chat lines", () => {
    let s = initialState();
    s = applyEvent(s, ev("ask", { text: "Which block did I move?" }));
    s = applyEvent(s, ev("answer", { text: "You moved the Toyota block." }));
    expect(s.chat).toEqual([
      { who: "user", text: "Which block did I move?" },
      { who: "engine", text: "You moved the Toyota block." },
    ]);
  });

  it("move events append timeline entries with even tokens", () => {
    let s = initialState();
    s = applyEvent(s, ev("move", { block: "Toyota" }));
    s = applyEvent(s, ev("move", { block: "Twitter" }));
    expect(s.timeline.map((t) => t.token)).toEqual([
      "|Now0|",
      "|Now2|",
      "|Now4|",
    ]);
    expect(s.timeline[2]?.label).toBe("moved Twitter");
  });

  it("noise and error events leave the timeline alone", () => {
    let s = initialState();
    s = applyEvent(s, ev("noise", { block: "Toyota" }));
    s = applyEvent(s, ev("error", { reason: "off the table" }));
    expect(s.timeline).toHaveLength(1);
  });

  it("selecting a past token enters ghost view, selecting the present leaves it", () => {
    let s = initialState();
    s = applyEvent(s, ev("move", { block: "Toyota" }));
    s = selectToken(s, "|Now0|");
    expect(isGhostView(s)).toBe(true);
    expect(s.viewingToken).toBe("|Now0|");
    s = selectToken(s, "|Now2|"); // the latest entry = the present
    expect(isGhostView(s)).toBe(false);
  });
});
