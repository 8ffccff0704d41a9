import { ApiClient } from "./api.js";
import { mountApp } from "./render.js";
import { applyEvent, initialState } from "./state.js";

const api = new ApiClient("");
const state = { current: initialState() };
const app = mountApp(document.getElementById("app")!, api, state);

api.events((ev) => {
  state.current = applyEvent(state.current, ev);
  void app.refresh();
});

void app.refresh();
