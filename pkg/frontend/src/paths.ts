/**
 * Element identity: child-index paths, computed by the same
 * element-children-only rule as the engine. This is the single identity
 * convention bridging live DOM elements and scene boxes.
 */
import type { NodePath } from "./protocol.js";

/** Path of child indices from the document element down to `el`. */
export function elementPath(el: Element): NodePath {
  const steps: number[] = [];
  let cur: Element = el;
  while (cur.parentElement) {
    const parent = cur.parentElement;
    steps.push(Array.prototype.indexOf.call(parent.children, cur));
    cur = parent;
  }
  return steps.reverse();
}

/** Resolve a path against a document; null when any step is out of range. */
export function resolvePath(doc: Document, path: NodePath): Element | null {
  let cur: Element | null = doc.documentElement;
  for (const step of path) {
    if (!cur || step < 0 || step >= cur.children.length) return null;
    cur = cur.children[step];
  }
  return cur;
}

/** All elements of a document in document order, starting at <html>. */
export function documentElements(doc: Document): Element[] {
  const root = doc.documentElement;
  return [root, ...root.querySelectorAll("*")];
}
