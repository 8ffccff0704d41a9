/** DOM rendering: SVG table view with pointer-drag moves, a chat panel,
 * and a clickable timeline with a ghost view of past scenes. */

import { ApiClient, SceneView } from "./api.js";
import {
  UiState,
  dropPosition,
  isGhostView,
  screenToTable,
  tableToScreen,
} from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface AppHandles {
  refresh(): Promise<void>;
  root: HTMLElement;
}

export function mountApp(
  root: HTMLElement,
  api: ApiClient,
  state: { current: UiState },
): AppHandles {
  root.innerHTML = "";
  const board = document.createElement("div");
  board.className = "board";
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", "600");
  svg.setAttribute("height", "600");
  board.appendChild(svg);

  const chat = document.createElement("div");
  chat.className = "chat";
  const log = document.createElement("div");
  log.className = "chat-log";
  const form = document.createElement("form");
  const input = document.createElement("input");
  input.placeholder = "Ask about the blocks…";
  const send = document.createElement("button");
  send.textContent = "Ask";
  form.append(input, send);
  chat.append(log, form);

  const timeline = document.createElement("div");
  timeline.className = "timeline";

  root.append(board, chat, timeline);
  const view = { width: 600, height: 600 };

  async function drawScene(): Promise<SceneView> {
    const at = state.current.viewingToken ?? undefined;
    const scene = await api.scene(at);
    svg.textContent = "";
    const ghost = isGhostView(state.current);
    svg.classList.toggle("ghost", ghost);
    const ordered = [...scene.blocks].sort(
      (a, b) => a.position[2] - b.position[2],
    );
    for (const b of ordered) {
      const [px, py] = tableToScreen(scene, view, b.position[0], b.position[1]);
      const size =
        (scene.side * Math.min(view.width / scene.table[0], view.height / scene.table[1])) *
        (1 + 0.15 * Math.round(b.position[2] / scene.side - 0.5));
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(px - size / 2));
      rect.setAttribute("y", String(py - size / 2));
      rect.setAttribute("width", String(size));
      rect.setAttribute("height", String(size));
      rect.setAttribute("fill", b.color);
      rect.setAttribute("stroke", "#222");
      rect.setAttribute("data-block", b.name);
      rect.classList.add("block");
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(px));
      label.setAttribute("y", String(py + 4));
      label.setAttribute("text-anchor", "middle");
      label.textContent = b.name;
      if (!ghost) attachDrag(rect, b.name, scene);
      svg.append(rect, label);
    }
    return scene;
  }

  function attachDrag(rect: SVGRectElement, name: string, scene: SceneView) {
    rect.addEventListener("pointerdown", (down) => {
      down.preventDefault();
      rect.setPointerCapture(down.pointerId);
      const onUp = async (up: PointerEvent) => {
        rect.removeEventListener("pointerup", onUp);
        const box = svg.getBoundingClientRect();
        const [tx, ty] = screenToTable(
          scene,
          view,
          up.clientX - box.left,
          up.clientY - box.top,
        );
        try {
          await api.move(name, dropPosition(scene, name, tx, ty));
        } catch (e) {
          pushLine("engine", `Can't put it there: ${(e as Error).message}`);
        }
        await refresh();
      };
      rect.addEventListener("pointerup", onUp);
    });
  }

  function pushLine(who: "user" | "engine", text: string) {
    const line = document.createElement("p");
    line.className = `line ${who}`;
    line.textContent = text;
    log.appendChild(line);
    log.scrollTop = log.scrollHeight;
  }

  function drawChatAndTimeline() {
    log.textContent = "";
    for (const line of state.current.chat) pushLine(line.who, line.text);
    timeline.textContent = "";
    for (const entry of state.current.timeline) {
      const btn = document.createElement("button");
      btn.textContent = entry.label;
      btn.dataset.token = entry.token;
      btn.classList.toggle("active", state.current.viewingToken === entry.token);
      btn.addEventListener("click", async () => {
        const last = state.current.timeline[state.current.timeline.length - 1];
        state.current = {
          ...state.current,
          viewingToken:
            last && entry.token === last.token ? null : entry.token,
        };
        await refresh();
      });
      timeline.appendChild(btn);
    }
  }

  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const text = input.value.trim();
    if (!text) return;
    input.value = "";
    const res = await api.ask(text);
    // the websocket will also deliver ask/answer events; render eagerly too
    pushLine("user", text);
    pushLine("engine", res.answer);
  });

  async function refresh(): Promise<void> {
    await drawScene();
    drawChatAndTimeline();
  }

  return { refresh, root };
}
