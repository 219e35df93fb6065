// Wire formats, mirroring the JSON the service emits field for field.

export interface RegionBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface ResourceLocator {
  kind: "web_page" | "file" | "application";
  value: string;
}

export interface CaptureResource {
  window_id: string;
  app_name: string;
  window_title: string;
  bounds: RegionBox;
  z_index: number;
  visible: boolean;
  selected: boolean;
  locator: ResourceLocator | null;
}

export type CaptureMode = "full_screen" | "selected_area";

export interface CaptureRecord {
  capture_id: string;
  created_at: string;
  mode: CaptureMode;
  region: RegionBox;
  image_ref: string;
  title: string;
  description: string;
  liked: boolean;
  resources: CaptureResource[];
  image_url: string;
  relative_time: string;
}

export interface CaptureDraft {
  draft_id: string;
  created_at: string;
  mode: CaptureMode;
  region: RegionBox;
  title: string;
  description: string;
  image_url: string;
  resources: CaptureResource[];
}

export interface CaptureEdits {
  title?: string;
  description?: string;
  deselect_ids?: string[];
  add_invisible_ids?: string[];
}

export interface ReopenAction {
  window_id: string;
  command: string;
  executed: boolean;
  error: string | null;
}

export interface ReopenSkip {
  window_id: string;
  reason: string;
}

export interface ReopenResult {
  capture_id: string;
  actions: ReopenAction[];
  skipped: ReopenSkip[];
}
