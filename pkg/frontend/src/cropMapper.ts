/**
 * Mapping between viewport drag rectangles and integer pixel crop regions.
 *
 * The image is displayed scaled by `zoom` (display px = image px * zoom).
 * Drags may run in any direction and may leave the displayed image; they are
 * normalized and clamped to the image edges before conversion, and the
 * resulting pixel region always has positive size within bounds, so the
 * server can never reject a submitted gesture on bounds.
 */

export interface ViewportRect {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface PixelRegion {
  x: number;
  y: number;
  w: number;
  h: number;
}

function clamp(value: number, low: number, high: number): number {
  return Math.min(Math.max(value, low), high);
}

/** Convert a drag gesture to the pixel region to submit to /crop. */
export function dragToPixelRegion(
  drag: ViewportRect,
  zoom: number,
  imageWidth: number,
  imageHeight: number,
): PixelRegion {
  if (zoom <= 0) throw new Error(`zoom must be positive, got ${zoom}`);
  const left = Math.min(drag.x1, drag.x2) / zoom;
  const right = Math.max(drag.x1, drag.x2) / zoom;
  const top = Math.min(drag.y1, drag.y2) / zoom;
  const bottom = Math.max(drag.y1, drag.y2) / zoom;

  let x = clamp(Math.round(left), 0, imageWidth - 1);
  let y = clamp(Math.round(top), 0, imageHeight - 1);
  const xEnd = clamp(Math.round(right), x + 1, imageWidth);
  const yEnd = clamp(Math.round(bottom), y + 1, imageHeight);
  return { x, y, w: xEnd - x, h: yEnd - y };
}

/** Where a recorded pixel region sits in the viewport at the current zoom. */
export function pixelRegionToViewport(region: PixelRegion, zoom: number): ViewportRect {
  if (zoom <= 0) throw new Error(`zoom must be positive, got ${zoom}`);
  return {
    x1: region.x * zoom,
    y1: region.y * zoom,
    x2: (region.x + region.w) * zoom,
    y2: (region.y + region.h) * zoom,
  };
}
