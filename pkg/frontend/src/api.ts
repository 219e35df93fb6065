import type {
  CaptureDraft,
  CaptureEdits,
  CaptureRecord,
  RegionBox,
  ReopenResult,
} from "./types.js";

/** Error body the service attaches to every non-2xx response. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/**
 * Thin typed client over the capture service HTTP API.
 *
 * The fetch function is injectable so tests can point the client at a
 * server on another origin (or stub it out entirely).
 */
export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly base: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  async listCaptures(query?: string): Promise<CaptureRecord[]> {
    const suffix = query ? `?q=${encodeURIComponent(query)}` : "";
    return this.request<CaptureRecord[]>("GET", `/api/captures${suffix}`);
  }

  async getCapture(captureId: string): Promise<CaptureRecord> {
    return this.request<CaptureRecord>("GET", `/api/captures/${captureId}`);
  }

  async createDraft(
    mode: "full_screen" | "selected_area",
    region?: RegionBox,
    scenarioOverride?: string,
  ): Promise<CaptureDraft> {
    const body: Record<string, unknown> = { mode };
    if (region !== undefined) body.region = region;
    if (scenarioOverride !== undefined) body.scenario_override = scenarioOverride;
    return this.request<CaptureDraft>("POST", "/api/drafts", body);
  }

  async saveCapture(draftId: string, edits: CaptureEdits): Promise<CaptureRecord> {
    return this.request<CaptureRecord>("POST", "/api/captures", {
      draft_id: draftId,
      edits,
    });
  }

  async updateCapture(
    captureId: string,
    fields: { title?: string; description?: string; liked?: boolean },
  ): Promise<CaptureRecord> {
    return this.request<CaptureRecord>("PATCH", `/api/captures/${captureId}`, fields);
  }

  async deleteCapture(captureId: string): Promise<void> {
    await this.request<void>("DELETE", `/api/captures/${captureId}`);
  }

  async reopen(captureId: string, resourceIds?: string[]): Promise<ReopenResult> {
    const body = resourceIds === undefined ? {} : { resource_ids: resourceIds };
    return this.request<ReopenResult>("POST", `/api/captures/${captureId}/reopen`, body);
  }

  imageUrl(relative: string): string {
    return this.base + relative;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let resp: Response;
    try {
      resp = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, "network_error", `service unreachable: ${String(err)}`);
    }
    if (!resp.ok) {
      throw await this.toApiError(resp);
    }
    if (resp.status === 204) {
      return undefined as T;
    }
    return (await resp.json()) as T;
  }

  private async toApiError(resp: Response): Promise<ApiError> {
    try {
      const payload = (await resp.json()) as { code?: string; message?: string };
      return new ApiError(
        resp.status,
        payload.code ?? "unknown_error",
        payload.message ?? `request failed with status ${resp.status}`,
      );
    } catch {
      return new ApiError(resp.status, "unknown_error", `request failed with status ${resp.status}`);
    }
  }
}
