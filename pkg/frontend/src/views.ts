import { h, VNode } from "./vdom.js";
import type { App, AppState, CaptureFormState, DetailState } from "./state.js";
import type { CaptureRecord, CaptureResource, ReopenResult } from "./types.js";

function inputValue(ev: Event): string {
  return (ev.target as HTMLInputElement).value;
}

function inputChecked(ev: Event): boolean {
  return (ev.target as HTMLInputElement).checked;
}

export function renderApp(state: AppState, app: App): VNode {
  return h(
    "div",
    { class: "app" },
    renderHeader(state, app),
    h("main", { class: "content" }, renderBody(state, app)),
  );
}

function renderBody(state: AppState, app: App): VNode {
  switch (state.route.view) {
    case "collection":
      return renderCollection(state, app);
    case "detail":
      return state.detail
        ? renderDetail(state.detail, app)
        : h("p", { class: "hint" }, state.loading ? "Loading…" : "Capture not found.");
    case "capture":
      return state.form
        ? renderCaptureForm(state.form, app)
        : h(
            "div",
            { class: "expired" },
            h("p", {}, "This draft is no longer available. Drafts are single use and expire after a few minutes."),
            h("button", { class: "btn", onclick: () => app.gotoCollection() }, "Back to collection"),
          );
  }
}

function renderHeader(state: AppState, app: App): VNode {
  return h(
    "header",
    { class: "topbar" },
    h("a", { class: "brand", href: "#/" }, "Snapshelf"),
    h(
      "div",
      { class: "capture-controls" },
      h(
        "button",
        { class: "btn", onclick: () => void app.startCapture("full_screen") },
        "Capture screen",
      ),
      h(
        "button",
        { class: "btn", onclick: () => app.toggleRegionPrompt() },
        "Capture area…",
      ),
    ),
    state.regionPrompt ? renderRegionPrompt(app) : null,
    h(
      "form",
      {
        class: "search",
        onsubmit: (ev: Event) => {
          ev.preventDefault();
          const field = (ev.target as HTMLFormElement).elements.namedItem("q") as HTMLInputElement;
          void app.submitSearch(field.value);
        },
      },
      h("input", {
        type: "search",
        name: "q",
        placeholder: "Search captures",
        value: state.searchText,
        oninput: (ev: Event) => app.setSearchText(inputValue(ev)),
      }),
    ),
  );
}

function renderRegionPrompt(app: App): VNode {
  const coords = { x: 0, y: 0, w: 0, h: 0 };
  const field = (name: keyof typeof coords, label: string): VNode =>
    h(
      "label",
      { class: "region-field" },
      label,
      h("input", {
        type: "number",
        value: 0,
        oninput: (ev: Event) => {
          coords[name] = Number(inputValue(ev)) || 0;
        },
      }),
    );
  return h(
    "form",
    {
      class: "region-prompt",
      onsubmit: (ev: Event) => {
        ev.preventDefault();
        void app.startCapture("selected_area", coords);
      },
    },
    field("x", "x"),
    field("y", "y"),
    field("w", "w"),
    field("h", "h"),
    h("button", { class: "btn", type: "submit" }, "Go"),
  );
}

export function renderCollection(state: AppState, app: App): VNode {
  const children: VNode[] = [];
  if (state.banner !== null) {
    children.push(h("div", { class: "banner error", role: "alert" }, state.banner));
  }
  if (state.records.length === 0 && !state.loading) {
    children.push(
      h(
        "p",
        { class: "hint" },
        state.searchText.trim()
          ? "Nothing matches that search."
          : "No captures yet. Take one with the buttons above.",
      ),
    );
  } else {
    children.push(
      h(
        "div",
        { class: "masonry" },
        state.records.map((record) => renderCard(record, app)),
      ),
    );
  }
  return h("section", { class: "collection" }, children);
}

function renderCard(record: CaptureRecord, app: App): VNode {
  return h(
    "article",
    {
      class: "card",
      "data-card-id": record.capture_id,
      onclick: () => app.openDetail(record.capture_id),
    },
    h("img", { class: "thumb", src: record.image_url, alt: record.title }),
    h(
      "div",
      { class: "card-body" },
      h(
        "div",
        { class: "card-top" },
        h("h2", { class: "card-title" }, record.title),
        h(
          "button",
          {
            class: record.liked ? "heart liked" : "heart",
            "aria-pressed": record.liked ? "true" : "false",
            title: record.liked ? "Unlike" : "Like",
            onclick: (ev: Event) => {
              ev.stopPropagation();
              void app.toggleLiked(record.capture_id);
            },
          },
          record.liked ? "♥" : "♡",
        ),
      ),
      record.description ? h("p", { class: "card-desc" }, record.description) : null,
      h(
        "div",
        { class: "card-meta" },
        h("span", {}, record.relative_time),
        h("span", {}, `${record.resources.length} apps`),
      ),
    ),
  );
}

export function renderDetail(detail: DetailState, app: App): VNode {
  const record = detail.record;
  return h(
    "section",
    { class: "detail" },
    h(
      "div",
      { class: "detail-head" },
      h("button", { class: "btn subtle", onclick: () => app.gotoCollection() }, "← Back"),
      h("h2", {}, record.title),
      h(
        "button",
        {
          class: record.liked ? "heart liked" : "heart",
          "aria-pressed": record.liked ? "true" : "false",
          onclick: () => void app.toggleLiked(record.capture_id),
        },
        record.liked ? "♥" : "♡",
      ),
      h("span", { class: "muted" }, record.relative_time),
    ),
    record.description ? h("p", { class: "detail-desc" }, record.description) : null,
    h(
      "figure",
      { class: detail.zoomed ? "shot zoomed" : "shot" },
      h("img", {
        src: record.image_url,
        alt: record.title,
        title: detail.zoomed ? "Click to fit" : "Click to zoom",
        onclick: () => app.detailToggleZoom(),
      }),
    ),
    h("h3", {}, "Captured apps"),
    h(
      "ul",
      { class: "resources" },
      record.resources.map((res) =>
        renderResourceRow(res, detail.checked.has(res.window_id), (checked) =>
          app.detailToggleResource(res.window_id, checked),
        ),
      ),
    ),
    h(
      "div",
      { class: "detail-actions" },
      h(
        "button",
        { class: "btn primary", disabled: detail.busy, onclick: () => void app.runReopen() },
        detail.busy ? "Opening…" : "Reopen selected",
      ),
    ),
    detail.error ? h("div", { class: "banner error", role: "alert" }, detail.error) : null,
    detail.reopen ? renderReopenResult(detail.reopen) : null,
  );
}

function renderReopenResult(result: ReopenResult): VNode {
  const rows: VNode[] = [];
  for (const action of result.actions) {
    rows.push(
      h(
        "li",
        { class: action.executed ? "reopen-ok" : "reopen-failed" },
        h("code", {}, action.command),
        action.executed ? " started" : ` failed: ${action.error ?? "unknown error"}`,
      ),
    );
  }
  for (const skip of result.skipped) {
    rows.push(
      h("li", { class: "reopen-skipped" }, `${skip.window_id} skipped (${skip.reason.replace(/_/g, " ")})`),
    );
  }
  if (rows.length === 0) {
    rows.push(h("li", { class: "muted" }, "Nothing to open."));
  }
  return h("ul", { class: "reopen-result" }, rows);
}

function renderResourceRow(
  res: CaptureResource,
  checked: boolean,
  onToggle: (checked: boolean) => void,
): VNode {
  return h(
    "li",
    { class: "resource-row", "data-window-id": res.window_id },
    h(
      "label",
      {},
      h("input", {
        type: "checkbox",
        checked,
        "data-window-id": res.window_id,
        onchange: (ev: Event) => onToggle(inputChecked(ev)),
      }),
      h(
        "span",
        { class: "resource-text" },
        h("strong", {}, res.app_name),
        h("span", { class: "muted" }, ` ${res.window_title}`),
        res.locator ? h("span", { class: "locator" }, res.locator.value) : h("span", { class: "locator muted" }, "no way to reopen"),
      ),
    ),
    res.visible ? null : h("span", { class: "badge" }, "hidden"),
  );
}

export function renderCaptureForm(form: CaptureFormState, app: App): VNode {
  const visible = form.draft.resources.filter((r) => r.visible);
  const invisible = form.draft.resources.filter((r) => !r.visible);
  return h(
    "section",
    { class: "capture-form" },
    h("h2", {}, "New capture"),
    h(
      "figure",
      { class: "shot" },
      h("img", { src: form.draft.image_url, alt: "Screenshot preview" }),
    ),
    h(
      "form",
      {
        onsubmit: (ev: Event) => {
          ev.preventDefault();
          void app.saveForm();
        },
      },
      h(
        "label",
        { class: "field" },
        "Title",
        h("input", {
          type: "text",
          name: "title",
          value: form.title,
          oninput: (ev: Event) => app.formSetTitle(inputValue(ev)),
        }),
      ),
      h(
        "label",
        { class: "field" },
        "Description",
        h("textarea", {
          name: "description",
          rows: 3,
          oninput: (ev: Event) => app.formSetDescription(inputValue(ev)),
        }, form.description),
      ),
      h("h3", {}, "In the shot"),
      h(
        "ul",
        { class: "resources" },
        visible.map((res) =>
          renderResourceRow(res, form.checked.has(res.window_id), (checked) =>
            app.formToggleResource(res.window_id, checked),
          ),
        ),
      ),
      invisible.length > 0
        ? h(
            "details",
            { class: "invisible-section" },
            h("summary", {}, `Not visible (${invisible.length})`),
            h(
              "ul",
              { class: "resources" },
              invisible.map((res) =>
                renderResourceRow(res, form.checked.has(res.window_id), (checked) =>
                  app.formToggleResource(res.window_id, checked),
                ),
              ),
            ),
          )
        : null,
      form.error ? h("div", { class: "banner error", role: "alert" }, form.error) : null,
      h(
        "div",
        { class: "form-actions" },
        h(
          "button",
          { class: "btn primary", type: "submit", disabled: form.saving },
          form.saving ? "Saving…" : "Save capture",
        ),
        h("button", { class: "btn subtle", type: "button", onclick: () => app.cancelForm() }, "Cancel"),
      ),
    ),
  );
}
