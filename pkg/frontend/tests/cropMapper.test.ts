import { describe, expect, it } from "vitest";

import {
  dragToPixelRegion,
  pixelRegionToViewport,
  type PixelRegion,
  type ViewportRect,
} from "../src/cropMapper.js";

/** Deterministic PRNG so the 50 random cases are reproducible. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** What the gateway stores for a submitted region: the region itself,
 * provided it is within bounds (otherwise it would 400). */
function serverRecordedRegion(region: PixelRegion, width: number, height: number): PixelRegion {
  if (region.w <= 0 || region.h <= 0) throw new Error("server rejects empty regions");
  if (region.x < 0 || region.y < 0 || region.x + region.w > width || region.y + region.h > height) {
    throw new Error("server rejects out-of-bounds regions");
  }
  return { ...region };
}

describe("dragToPixelRegion", () => {
  it("maps a full-image drag at zoom 1 to the full extent", () => {
    const region = dragToPixelRegion({ x1: 0, y1: 0, x2: 64, y2: 48 }, 1, 64, 48);
    expect(region).toEqual({ x: 0, y: 0, w: 64, h: 48 });
  });

  it("doubles coordinates at zoom 0.5", () => {
    const region = dragToPixelRegion({ x1: 5, y1: 10, x2: 15, y2: 20 }, 0.5, 100, 100);
    expect(region).toEqual({ x: 10, y: 20, w: 20, h: 20 });
  });

  it("normalizes reversed drags", () => {
    const forward = dragToPixelRegion({ x1: 2, y1: 3, x2: 10, y2: 12 }, 1, 32, 32);
    const reverse = dragToPixelRegion({ x1: 10, y1: 12, x2: 2, y2: 3 }, 1, 32, 32);
    expect(reverse).toEqual(forward);
  });

  it("clamps out-of-bounds drags to the image edges", () => {
    const region = dragToPixelRegion({ x1: -20, y1: -5, x2: 200, y2: 300 }, 1, 40, 30);
    expect(region).toEqual({ x: 0, y: 0, w: 40, h: 30 });
  });

  it("never produces an empty region from a degenerate drag", () => {
    const region = dragToPixelRegion({ x1: 7, y1: 7, x2: 7, y2: 7 }, 1, 16, 16);
    expect(region.w).toBeGreaterThan(0);
    expect(region.h).toBeGreaterThan(0);
  });

  it("rejects non-positive zoom", () => {
    expect(() => dragToPixelRegion({ x1: 0, y1: 0, x2: 1, y2: 1 }, 0, 8, 8)).toThrow();
  });
});

describe("crop round trip (acceptance)", () => {
  it("equals the server-recorded crop_region for 50 random zoom/drag cases", () => {
    const random = mulberry32(20240502);
    const zooms = [0.25, 0.5, 0.75, 1, 1.5, 2, 3, 4];
    for (let i = 0; i < 50; i++) {
      const width = 16 + Math.floor(random() * 500);
      const height = 16 + Math.floor(random() * 500);
      const zoom = zooms[Math.floor(random() * zooms.length)];
      // drags may start/end anywhere, including outside the displayed image
      const drag: ViewportRect = {
        x1: (random() * 1.4 - 0.2) * width * zoom,
        y1: (random() * 1.4 - 0.2) * height * zoom,
        x2: (random() * 1.4 - 0.2) * width * zoom,
        y2: (random() * 1.4 - 0.2) * height * zoom,
      };
      const submitted = dragToPixelRegion(drag, zoom, width, height);
      const recorded = serverRecordedRegion(submitted, width, height);
      expect(recorded).toEqual(submitted);

      // reading the record back and mapping through the viewport is exact
      const viewport = pixelRegionToViewport(recorded, zoom);
      const roundTripped = dragToPixelRegion(viewport, zoom, width, height);
      expect(roundTripped).toEqual(recorded);
    }
  });
});
