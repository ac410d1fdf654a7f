/**
 * Viewer-side scene state and interaction logic, kept free of rendering
 * concerns so the contracts are directly testable: diff application with
 * stale-frame discarding, subtree isolation on click, click dispatch into
 * the inspected page on double click, scroll-wheel increments for the
 * numeric inputs, and the element counter.
 */
import { resolvePath } from "./paths.js";
import {
  applyDiff,
  DEFAULT_STYLE,
  emptyScene,
  isStrictPrefix,
  type DiffDoc,
  type FilterDoc,
  type NodePath,
  type SceneDoc,
} from "./protocol.js";

export const CLICK_ENLARGE_FACTOR = 1.25;
export const POPOVER_TRUNCATE_AT = 2000;

export interface PopoverContent {
  text: string;
  truncated: boolean;
  warning: string | null;
}

export class ViewerState {
  scene: SceneDoc = emptyScene(DEFAULT_STYLE);
  /** Path of the box currently enlarged by a click, if any. */
  selected: NodePath | null = null;
  onSceneChange: (scene: SceneDoc) => void = () => {};

  /** Apply a streamed diff; stale or out-of-order frames are discarded. */
  acceptDiff(diff: DiffDoc): boolean {
    if (diff.target_revision <= this.scene.revision) return false;
    if (diff.base_revision !== this.scene.revision) return false;
    this.scene = applyDiff(this.scene, diff);
    this.onSceneChange(this.scene);
    return true;
  }

  /** Replace the whole scene (initial GET /scene or resync). */
  acceptScene(scene: SceneDoc): void {
    this.scene = scene;
    this.onSceneChange(this.scene);
  }

  /** Counter label content: the number of currently visualized elements. */
  counterText(): string {
    return `${this.scene.visible_count} elements`;
  }

  /** Click: select the box and produce the subtree-isolation filter. */
  clickBox(path: NodePath): FilterDoc {
    this.selected = path;
    return { type: "filter", subtree_root: path };
  }

  /** The box paths that survive isolating `root`, per the engine's rule. */
  isolatedPaths(root: NodePath): NodePath[] {
    return this.scene.boxes
      .map((b) => b.path)
      .filter((p) => samePath(p, root) || isStrictPrefix(root, p));
  }

  /** Popover body for a clicked box, truncated to keep the view usable. */
  popoverFor(path: NodePath, warning: string | null = null): PopoverContent {
    const box = this.scene.boxes.find((b) => samePath(b.path, path));
    const text = box ? box.match_text : "";
    if (text.length <= POPOVER_TRUNCATE_AT) {
      return { text, truncated: false, warning };
    }
    return {
      text: text.slice(0, POPOVER_TRUNCATE_AT),
      truncated: true,
      warning,
    };
  }
}

export function samePath(a: NodePath, b: NodePath): boolean {
  return a.length === b.length && a.every((s, i) => s === b[i]);
}

/**
 * Double click: resolve the box's path in the live page and send a click
 * event to the element, enabling basic navigation. Returns false when the
 * path no longer resolves (the page changed since the scene was built).
 */
export function dispatchClickAt(doc: Document, path: NodePath): boolean {
  const el = resolvePath(doc, path);
  if (!el) return false;
  const view = doc.defaultView ?? undefined;
  el.dispatchEvent(
    new (doc.defaultView as any).MouseEvent("click", {
      bubbles: true,
      cancelable: true,
      view,
    }),
  );
  return true;
}

/** One horizontal-scroll detent on a bound numeric input. */
export function wheelIncrement(
  current: number,
  detents: number,
  step: number,
  min = 0,
): number {
  return Math.max(min, current + detents * step);
}
