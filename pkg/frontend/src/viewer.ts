/**
 * Side-by-side pre/cur viewer with drag-to-crop.
 *
 * A drag on either pane draws a rubber-band rectangle; on release the
 * viewport rect maps to an integer pixel region (see cropMapper) and is
 * submitted to /crop for the selected side(s). Out-of-bounds drags are
 * clamped to the image edges before submission.
 */

import type { GatewayClient } from "./api.js";
import { dragToPixelRegion, pixelRegionToViewport, type ViewportRect } from "./cropMapper.js";
import type { ImageRecord } from "./types.js";

export interface ViewerEvents {
  onCrop(records: ImageRecord[]): void;
  onError(message: string): void;
}

export class PairViewer {
  readonly element: HTMLElement;
  private zoom = 1.0;
  private pre: ImageRecord | null = null;
  private cur: ImageRecord | null = null;
  private cropBoth = true;

  constructor(
    private readonly client: GatewayClient,
    private readonly sessionId: string,
    private readonly events: ViewerEvents,
  ) {
    this.element = document.createElement("div");
    this.element.className = "pair-viewer";
  }

  setZoom(zoom: number): void {
    this.zoom = zoom;
    this.render();
  }

  setCropBoth(both: boolean): void {
    this.cropBoth = both;
  }

  setPair(pre: ImageRecord, cur: ImageRecord): void {
    this.pre = pre;
    this.cur = cur;
    this.render();
  }

  private render(): void {
    this.element.replaceChildren();
    if (!this.pre || !this.cur) return;
    this.element.appendChild(this.pane(this.pre, "pre"));
    this.element.appendChild(this.pane(this.cur, "cur"));
  }

  private pane(record: ImageRecord, side: "pre" | "cur"): HTMLElement {
    const pane = document.createElement("div");
    pane.className = `pane pane-${side}`;
    pane.style.position = "relative";
    pane.style.width = `${record.width * this.zoom}px`;
    pane.style.height = `${record.height * this.zoom}px`;

    const img = document.createElement("img");
    img.src = this.client.imageUrl(record.self_id);
    img.alt = record.filename;
    img.draggable = false;
    img.style.width = "100%";
    img.style.height = "100%";
    pane.appendChild(img);

    const band = document.createElement("div");
    band.className = "rubber-band";
    band.style.display = "none";
    pane.appendChild(band);

    let start: { x: number; y: number } | null = null;

    const toLocal = (event: MouseEvent) => {
      const bounds = pane.getBoundingClientRect();
      return { x: event.clientX - bounds.left, y: event.clientY - bounds.top };
    };

    pane.addEventListener("mousedown", (event) => {
      start = toLocal(event);
      band.style.display = "block";
    });
    pane.addEventListener("mousemove", (event) => {
      if (!start) return;
      const now = toLocal(event);
      band.style.left = `${Math.min(start.x, now.x)}px`;
      band.style.top = `${Math.min(start.y, now.y)}px`;
      band.style.width = `${Math.abs(now.x - start.x)}px`;
      band.style.height = `${Math.abs(now.y - start.y)}px`;
    });
    pane.addEventListener("mouseup", (event) => {
      if (!start) return;
      const now = toLocal(event);
      const drag: ViewportRect = { x1: start.x, y1: start.y, x2: now.x, y2: now.y };
      start = null;
      band.style.display = "none";
      void this.submitCrop(drag, side);
    });
    return pane;
  }

  async submitCrop(drag: ViewportRect, side: "pre" | "cur"): Promise<ImageRecord[]> {
    if (!this.pre || !this.cur) return [];
    const region = dragToPixelRegion(drag, this.zoom, this.pre.width, this.pre.height);
    const targets = this.cropBoth ? [this.pre, this.cur] : [side === "pre" ? this.pre : this.cur];
    const records: ImageRecord[] = [];
    try {
      for (const target of targets) {
        records.push(await this.client.crop(this.sessionId, target.self_id, region));
      }
      this.events.onCrop(records);
      return records;
    } catch (error: any) {
      // e.g. a 400 on a race with a concurrent session change
      this.events.onError(error?.message ?? String(error));
      return records;
    }
  }

  /** Where a recorded crop sits on screen at the current zoom. */
  outline(record: ImageRecord): ViewportRect | null {
    if (!record.crop_region) return null;
    return pixelRegionToViewport(record.crop_region, this.zoom);
  }
}

export function renderCropThumbnails(
  records: ImageRecord[],
  imageUrl: (id: string) => string,
): HTMLElement {
  const strip = document.createElement("div");
  strip.className = "crop-strip";
  for (const record of records) {
    const figure = document.createElement("figure");
    const img = document.createElement("img");
    img.src = imageUrl(record.self_id);
    img.alt = record.filename;
    img.className = "crop-thumb";
    const caption = document.createElement("figcaption");
    caption.textContent = record.filename;
    figure.appendChild(img);
    figure.appendChild(caption);
    strip.appendChild(figure);
  }
  return strip;
}
