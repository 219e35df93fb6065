import { ApiClient } from "./api.js";
import { App } from "./state.js";
import { renderApp } from "./views.js";
import { apply } from "./vdom.js";

window.addEventListener("load", () => {
  const root = document.getElementById("app");
  if (root === null) throw new Error("missing #app mount point");

  const app = new App(
    new ApiClient(""),
    (a) => apply(root, renderApp(a.state, a)),
    (hash) => {
      if (window.location.hash === hash) {
        // Same hash fires no hashchange event; route by hand.
        void app.handleRoute(hash);
      } else {
        window.location.hash = hash;
      }
    },
  );

  window.addEventListener("hashchange", () => {
    void app.handleRoute(window.location.hash);
  });
  void app.handleRoute(window.location.hash);
});
