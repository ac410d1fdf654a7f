/**
 * DOM measurement: serialize the inspected document and collect per-element
 * border-box rectangles, scroll extents and visibility, keyed by child-index
 * paths. Only same-origin frames can be measured; the browser forbids
 * touching cross-origin content, so callers must check access first.
 */
import { documentElements, elementPath } from "./paths.js";
import type { MeasurementDoc, SnapshotDoc } from "./protocol.js";

/** True when the frame's document is programmatically accessible. */
export function canMeasureFrame(frame: HTMLIFrameElement): boolean {
  try {
    return frame.contentDocument !== null && frame.contentDocument !== undefined;
  } catch {
    return false; // cross-origin access throws
  }
}

export function measureViewport(win: Window): SnapshotDoc["viewport"] {
  return {
    w: Math.max(1, win.innerWidth),
    h: Math.max(1, win.innerHeight),
    scroll_x: Math.max(0, win.scrollX || 0),
    scroll_y: Math.max(0, win.scrollY || 0),
  };
}

export function measureElements(doc: Document, win: Window): MeasurementDoc[] {
  const scrollX = win.scrollX || 0;
  const scrollY = win.scrollY || 0;
  return documentElements(doc).map((el) => {
    const box = el.getBoundingClientRect();
    const w = Math.max(0, box.width);
    const h = Math.max(0, box.height);
    const scrollW = el.scrollWidth > Math.ceil(w) ? el.scrollWidth : 0;
    const scrollH = el.scrollHeight > Math.ceil(h) ? el.scrollHeight : 0;
    return {
      path: elementPath(el),
      rect: [box.left + scrollX, box.top + scrollY, w, h],
      scroll_w: scrollW,
      scroll_h: scrollH,
      visible: w > 0 && h > 0,
    };
  });
}

/**
 * Best-effort page screenshot: rasterize the document into a canvas via an
 * SVG foreignObject image. Returns null when the environment cannot render
 * (no canvas 2D context, tainted content, serialization failure).
 */
export async function captureScreenshot(
  doc: Document,
  win: Window,
): Promise<{ png_base64: string; page_w: number; page_h: number } | null> {
  try {
    const width = Math.max(doc.documentElement.scrollWidth, win.innerWidth);
    const height = Math.max(doc.documentElement.scrollHeight, win.innerHeight);
    const xml = new XMLSerializer().serializeToString(doc.documentElement);
    const svg =
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">` +
      `<foreignObject width="100%" height="100%">${xml}</foreignObject></svg>`;
    const url = "data:image/svg+xml;charset=utf-8," + encodeURIComponent(svg);
    const image = await loadImage(url, doc);
    const canvas = doc.createElement("canvas");
    canvas.width = width;
    canvas.height = height;
    const ctx = canvas.getContext("2d");
    if (!ctx) return null;
    ctx.drawImage(image, 0, 0);
    const dataUrl = canvas.toDataURL("image/png");
    return {
      png_base64: dataUrl.slice("data:image/png;base64,".length),
      page_w: width,
      page_h: height,
    };
  } catch {
    return null;
  }
}

function loadImage(url: string, doc: Document): Promise<HTMLImageElement> {
  return new Promise((resolve, reject) => {
    const img = doc.createElement("img");
    img.onload = () => resolve(img);
    img.onerror = () => reject(new Error("image load failed"));
    img.src = url;
  });
}

/** Full snapshot of a same-origin document, ready for POST /snapshot. */
export async function measureDocument(
  doc: Document,
  win: Window,
  withScreenshot = true,
): Promise<SnapshotDoc> {
  const shot = withScreenshot ? await captureScreenshot(doc, win) : null;
  return {
    type: "snapshot",
    html: doc.documentElement.outerHTML,
    measurements: measureElements(doc, win),
    viewport: measureViewport(win),
    screenshot: shot ? shot.png_base64 : null,
    page_w: shot ? shot.page_w : null,
    page_h: shot ? shot.page_h : null,
    origin: "live-push",
  };
}
