import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { dirname, resolve } from "node:path";
import { fileURLToPath } from "node:url";
import { ApiClient } from "../src/api.js";
import { App, collectEdits, initialChecked, type CaptureFormState } from "../src/state.js";
import type { CaptureDraft } from "../src/types.js";
import { findAll } from "../src/vdom.js";
import { renderCaptureForm, renderCollection } from "../src/views.js";
import { startService, type RunningService } from "./service.js";

const here = dirname(fileURLToPath(import.meta.url));
const FIVE_WINDOWS = resolve(here, "fixtures", "five_windows.json");

let service: RunningService;
let client: ApiClient;

beforeAll(async () => {
  service = await startService();
  client = new ApiClient(service.base);
});

afterAll(async () => {
  await service.stop();
});

function sleep(ms: number): Promise<void> {
  return new Promise((r) => setTimeout(r, ms));
}

function formFor(draft: CaptureDraft): CaptureFormState {
  // Mirrors what App.startCapture builds for a fresh draft.
  return {
    draft,
    checked: initialChecked(draft),
    title: draft.title,
    description: draft.description,
    saving: false,
    error: null,
  };
}

describe("collection ordering against the live API", () => {
  it("renders cards in exactly the API-returned order for a liked/unliked mix", async () => {
    const saved: string[] = [];
    for (const name of ["A", "B", "C", "D", "E"]) {
      const draft = await client.createDraft("full_screen");
      const record = await client.saveCapture(draft.draft_id, { title: `capture ${name}` });
      saved.push(record.capture_id);
      // Keep created_at values (millisecond precision) strictly distinct.
      await sleep(15);
    }
    const [a, b, c, d, e] = saved;
    await client.updateCapture(b, { liked: true });
    await client.updateCapture(d, { liked: true });

    const records = await client.listCaptures();
    expect(records.map((r) => r.capture_id)).toEqual([d, b, e, c, a]);

    const app = new App(client, () => {}, () => {});
    app.state.records = records;
    const tree = renderCollection(app.state, app);
    const cardIds = findAll(tree, (el) => "data-card-id" in el.attrs).map(
      (el) => el.attrs["data-card-id"],
    );
    expect(cardIds).toEqual(records.map((r) => r.capture_id));
  });
});

describe("capture view preselection against a live draft", () => {
  it("prechecks exactly the visible resources of a 2-visible/3-invisible draft", async () => {
    const draft = await client.createDraft("full_screen", undefined, FIVE_WINDOWS);

    const visible = draft.resources.filter((r) => r.visible).map((r) => r.window_id);
    const invisible = draft.resources.filter((r) => !r.visible).map((r) => r.window_id);
    expect(visible.sort()).toEqual(["editor", "pdf"]);
    expect(invisible.sort()).toEqual(["chat", "files", "player"]);

    const app = new App(client, () => {}, () => {});
    const tree = renderCaptureForm(formFor(draft), app);
    const boxes = findAll(tree, (el) => el.tag === "input" && el.attrs["type"] === "checkbox");
    const checkedIds = boxes
      .filter((el) => el.attrs["checked"] === true)
      .map((el) => el.attrs["data-window-id"]);
    const uncheckedIds = boxes
      .filter((el) => el.attrs["checked"] !== true)
      .map((el) => el.attrs["data-window-id"]);

    expect([...checkedIds].sort()).toEqual(["editor", "pdf"]);
    expect([...uncheckedIds].sort()).toEqual(["chat", "files", "player"]);
  });
});

describe("untouched form save against the live service", () => {
  it("produces a record identical to the draft defaults", async () => {
    const draft = await client.createDraft("full_screen", undefined, FIVE_WINDOWS);

    const form = formFor(draft);
    const edits = collectEdits(form.draft, form.checked, form.title, form.description);
    expect(edits).toEqual({});

    const record = await client.saveCapture(draft.draft_id, edits);
    expect(record.capture_id).toBe(draft.draft_id);
    expect(record.created_at).toBe(draft.created_at);
    expect(record.mode).toBe(draft.mode);
    expect(record.region).toEqual(draft.region);
    expect(record.title).toBe(draft.title);
    expect(record.description).toBe(draft.description);
    expect(record.liked).toBe(false);
    expect(record.resources).toEqual(draft.resources);
    expect(record.image_url).toBe(draft.image_url);

    // The stored copy reads back the same, and its screenshot is a real PNG.
    const fetched = await client.getCapture(record.capture_id);
    expect(fetched.resources).toEqual(draft.resources);
    expect(fetched.title).toBe(draft.title);
    const img = await fetch(service.base + record.image_url);
    expect(img.ok).toBe(true);
    const bytes = new Uint8Array(await img.arrayBuffer());
    expect([...bytes.slice(0, 4)]).toEqual([0x89, 0x50, 0x4e, 0x47]);
  });
});
