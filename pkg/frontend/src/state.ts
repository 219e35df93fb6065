import { ApiClient, ApiError } from "./api.js";
import type {
  CaptureDraft,
  CaptureEdits,
  CaptureMode,
  CaptureRecord,
  RegionBox,
  ReopenResult,
} from "./types.js";

export type Route =
  | { view: "collection" }
  | { view: "detail"; captureId: string }
  | { view: "capture"; draftId: string };

export interface CaptureFormState {
  draft: CaptureDraft;
  checked: Set<string>;
  title: string;
  description: string;
  saving: boolean;
  error: string | null;
}

export interface DetailState {
  record: CaptureRecord;
  checked: Set<string>;
  zoomed: boolean;
  reopen: ReopenResult | null;
  busy: boolean;
  error: string | null;
}

export interface AppState {
  route: Route;
  loading: boolean;
  records: CaptureRecord[];
  searchText: string;
  banner: string | null;
  regionPrompt: boolean;
  detail: DetailState | null;
  form: CaptureFormState | null;
}

/** Window ids the capture form should start with ticked. */
export function initialChecked(draft: CaptureDraft): Set<string> {
  return new Set(draft.resources.filter((r) => r.selected).map((r) => r.window_id));
}

/**
 * Diff the form against the draft's defaults. An untouched form yields
 * an empty object, so saving it keeps every default exactly.
 */
export function collectEdits(
  draft: CaptureDraft,
  checked: Set<string>,
  title: string,
  description: string,
): CaptureEdits {
  const edits: CaptureEdits = {};
  if (title !== draft.title) edits.title = title;
  if (description !== draft.description) edits.description = description;
  const deselect = draft.resources
    .filter((r) => r.visible && !checked.has(r.window_id))
    .map((r) => r.window_id);
  const add = draft.resources
    .filter((r) => !r.visible && checked.has(r.window_id))
    .map((r) => r.window_id);
  if (deselect.length > 0) edits.deselect_ids = deselect;
  if (add.length > 0) edits.add_invisible_ids = add;
  return edits;
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  return String(err);
}

/**
 * All application state plus the actions views dispatch into. Rendering
 * is delegated to the `repaint` callback so the class never touches the
 * DOM itself and can be driven headless in tests.
 */
export class App {
  state: AppState = {
    route: { view: "collection" },
    loading: false,
    records: [],
    searchText: "",
    banner: null,
    regionPrompt: false,
    detail: null,
    form: null,
  };

  constructor(
    private readonly api: ApiClient,
    private readonly repaint: (app: App) => void,
    private readonly setHash: (hash: string) => void,
  ) {}

  private notify(): void {
    this.repaint(this);
  }

  /** Route the given location hash, loading whatever the view needs. */
  async handleRoute(hash: string): Promise<void> {
    const route = parseHash(hash);
    this.state.route = route;
    if (route.view === "collection") {
      await this.loadCollection(this.state.searchText);
    } else if (route.view === "detail") {
      await this.loadDetail(route.captureId);
    } else {
      // Drafts are single use and cannot be re-fetched, so this view only
      // works with the form state created by startCapture. A stale hash
      // (reload, bookmark) falls through to the expired notice.
      if (this.state.form === null || this.state.form.draft.draft_id !== route.draftId) {
        this.state.form = null;
      }
      this.notify();
    }
  }

  async loadCollection(query: string): Promise<void> {
    this.state.loading = true;
    this.notify();
    try {
      this.state.records = await this.api.listCaptures(query.trim() || undefined);
      this.state.banner = null;
    } catch (err) {
      // Keep whatever cards we already had; just surface the failure.
      this.state.banner = describe(err);
    }
    this.state.loading = false;
    this.notify();
  }

  async loadDetail(captureId: string): Promise<void> {
    this.state.loading = true;
    this.state.detail = null;
    this.notify();
    try {
      const record = await this.api.getCapture(captureId);
      this.state.detail = {
        record,
        checked: new Set(record.resources.filter((r) => r.selected).map((r) => r.window_id)),
        zoomed: false,
        reopen: null,
        busy: false,
        error: null,
      };
    } catch (err) {
      this.state.banner = describe(err);
      this.state.route = { view: "collection" };
    }
    this.state.loading = false;
    this.notify();
  }

  setSearchText(text: string): void {
    this.state.searchText = text;
  }

  async submitSearch(text: string): Promise<void> {
    this.state.searchText = text;
    if (this.state.route.view !== "collection") {
      this.setHash("#/");
      return;
    }
    await this.loadCollection(text);
  }

  openDetail(captureId: string): void {
    this.setHash(`#/detail/${captureId}`);
  }

  gotoCollection(): void {
    this.setHash("#/");
  }

  /** Heart toggle: flip immediately, reconcile with the PATCH response. */
  async toggleLiked(captureId: string): Promise<void> {
    const record =
      this.state.records.find((r) => r.capture_id === captureId) ??
      (this.state.detail?.record.capture_id === captureId ? this.state.detail.record : undefined);
    if (record === undefined) return;
    const wanted = !record.liked;
    record.liked = wanted;
    this.notify();
    try {
      const updated = await this.api.updateCapture(captureId, { liked: wanted });
      // Swap in the server's copy but keep the card where it is; order
      // only changes on the next full list fetch.
      this.state.records = this.state.records.map((r) =>
        r.capture_id === captureId ? updated : r,
      );
      if (this.state.detail?.record.capture_id === captureId) {
        this.state.detail.record = updated;
      }
    } catch (err) {
      record.liked = !wanted;
      this.state.banner = describe(err);
    }
    this.notify();
  }

  toggleRegionPrompt(): void {
    this.state.regionPrompt = !this.state.regionPrompt;
    this.notify();
  }

  async startCapture(mode: CaptureMode, region?: RegionBox): Promise<void> {
    this.state.banner = null;
    try {
      const draft = await this.api.createDraft(mode, region);
      this.state.form = {
        draft,
        checked: initialChecked(draft),
        title: draft.title,
        description: draft.description,
        saving: false,
        error: null,
      };
      this.state.regionPrompt = false;
      this.setHash(`#/capture/${draft.draft_id}`);
    } catch (err) {
      this.state.banner = describe(err);
      this.notify();
    }
  }

  formSetTitle(text: string): void {
    if (this.state.form) this.state.form.title = text;
  }

  formSetDescription(text: string): void {
    if (this.state.form) this.state.form.description = text;
  }

  formToggleResource(windowId: string, checked: boolean): void {
    if (!this.state.form) return;
    if (checked) this.state.form.checked.add(windowId);
    else this.state.form.checked.delete(windowId);
  }

  async saveForm(): Promise<CaptureRecord | null> {
    const form = this.state.form;
    if (form === null || form.saving) return null;
    form.saving = true;
    form.error = null;
    this.notify();
    try {
      const edits = collectEdits(form.draft, form.checked, form.title, form.description);
      const record = await this.api.saveCapture(form.draft.draft_id, edits);
      this.state.form = null;
      this.setHash("#/");
      return record;
    } catch (err) {
      form.saving = false;
      form.error = describe(err);
      this.notify();
      return null;
    }
  }

  cancelForm(): void {
    this.state.form = null;
    this.setHash("#/");
  }

  detailToggleResource(windowId: string, checked: boolean): void {
    if (!this.state.detail) return;
    if (checked) this.state.detail.checked.add(windowId);
    else this.state.detail.checked.delete(windowId);
  }

  detailToggleZoom(): void {
    if (!this.state.detail) return;
    this.state.detail.zoomed = !this.state.detail.zoomed;
    this.notify();
  }

  async runReopen(): Promise<void> {
    const detail = this.state.detail;
    if (detail === null || detail.busy) return;
    detail.busy = true;
    detail.error = null;
    this.notify();
    try {
      detail.reopen = await this.api.reopen(detail.record.capture_id, [...detail.checked]);
    } catch (err) {
      detail.error = describe(err);
    }
    detail.busy = false;
    this.notify();
  }
}

export function parseHash(hash: string): Route {
  const parts = hash.replace(/^#\/?/, "").split("/").filter((p) => p.length > 0);
  if (parts[0] === "detail" && parts.length === 2) {
    return { view: "detail", captureId: parts[1] };
  }
  if (parts[0] === "capture" && parts.length === 2) {
    return { view: "capture", draftId: parts[1] };
  }
  return { view: "collection" };
}
