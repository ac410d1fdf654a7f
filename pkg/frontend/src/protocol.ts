/**
 * Wire types shared with the engine, and client-side diff application.
 *
 * The engine owns these JSON schemas; this module mirrors them exactly
 * and reproduces the engine's diff-apply semantics so that a client
 * replaying streamed diffs converges on the same scene as GET /scene.
 */

export type NodePath = number[];

export interface BoxDoc {
  path: NodePath;
  pos: [number, number, number];
  size: [number, number, number];
  color: [number, number, number];
  uv: [number, number, number, number] | null;
  depth: number;
  match_text: string;
}

export interface LineDoc {
  from: NodePath;
  to: NodePath;
  a: [number, number, number];
  b: [number, number, number];
}

export interface StyleDoc {
  layer_gap: number;
  box_height: number;
  color_mode: "per-layer" | "tag-hash";
  texture_mode: "none" | "leaves-only" | "all-boxes";
  world_scale: number;
}

export interface SceneDoc {
  revision: number;
  style: StyleDoc;
  boxes: BoxDoc[];
  lines: LineDoc[];
  visible_count: number;
  max_depth: number;
  screenshot_ref: string | null;
}

export interface DiffDoc {
  type: "diff";
  base_revision: number;
  target_revision: number;
  added: BoxDoc[];
  removed: NodePath[];
  changed: BoxDoc[];
  max_depth: number;
  screenshot_ref: string | null;
}

export interface MeasurementDoc {
  path: NodePath;
  rect: [number, number, number, number];
  scroll_w: number;
  scroll_h: number;
  visible: boolean;
}

export interface SnapshotDoc {
  type?: "snapshot";
  html: string;
  measurements: MeasurementDoc[] | null;
  viewport: { w: number; h: number; scroll_x: number; scroll_y: number } | null;
  screenshot: string | null;
  page_w: number | null;
  page_h: number | null;
  origin: "file" | "url" | "live-push";
}

export interface FilterDoc {
  type?: "filter";
  depth_min?: number;
  depth_max?: number | null;
  search?: string;
  subtree_root?: NodePath | null;
  cropping?: boolean;
}

export function pathKey(path: NodePath): string {
  return path.join("/");
}

export function comparePaths(a: NodePath, b: NodePath): number {
  const n = Math.min(a.length, b.length);
  for (let i = 0; i < n; i++) {
    if (a[i] !== b[i]) return a[i] - b[i];
  }
  return a.length - b.length;
}

export function isStrictPrefix(prefix: NodePath, path: NodePath): boolean {
  if (prefix.length >= path.length) return false;
  return prefix.every((step, i) => step === path[i]);
}

/** Recompute connector lines from a document-ordered box list, exactly as
 * the engine does: a line per box whose parent path is also present. */
export function connectBoxes(boxes: BoxDoc[]): LineDoc[] {
  const byKey = new Map(boxes.map((b) => [pathKey(b.path), b]));
  const lines: LineDoc[] = [];
  for (const box of boxes) {
    if (box.path.length === 0) continue;
    const parent = byKey.get(pathKey(box.path.slice(0, -1)));
    if (!parent) continue;
    lines.push({
      from: box.path,
      to: parent.path,
      a: [box.pos[0], box.pos[1] + box.size[1] / 2, box.pos[2]],
      b: [parent.pos[0], parent.pos[1] - parent.size[1] / 2, parent.pos[2]],
    });
  }
  return lines;
}

/** Apply a diff to its base scene, reproducing the engine's target scene. */
export function applyDiff(scene: SceneDoc, diff: DiffDoc): SceneDoc {
  if (diff.base_revision !== scene.revision) {
    throw new Error(
      `diff base ${diff.base_revision} does not match scene revision ${scene.revision}`,
    );
  }
  const byKey = new Map(scene.boxes.map((b) => [pathKey(b.path), b]));
  for (const path of diff.removed) byKey.delete(pathKey(path));
  for (const box of diff.added) byKey.set(pathKey(box.path), box);
  for (const box of diff.changed) byKey.set(pathKey(box.path), box);
  const boxes = [...byKey.values()].sort((x, y) => comparePaths(x.path, y.path));
  return {
    revision: diff.target_revision,
    style: scene.style,
    boxes,
    lines: connectBoxes(boxes),
    visible_count: boxes.length,
    max_depth: diff.max_depth,
    screenshot_ref: diff.screenshot_ref,
  };
}

export function emptyScene(style: StyleDoc): SceneDoc {
  return {
    revision: 0,
    style,
    boxes: [],
    lines: [],
    visible_count: 0,
    max_depth: 0,
    screenshot_ref: null,
  };
}

export const DEFAULT_STYLE: StyleDoc = {
  layer_gap: 1.0,
  box_height: 0.2,
  color_mode: "per-layer",
  texture_mode: "none",
  world_scale: 0.001,
};
