"""Page-plane geometry: element rectangles, viewport, cropping.

Rectangles live in CSS-pixel page coordinates with the origin at the
top-left. They come either from browser measurements pushed alongside a
snapshot, or from a deterministic synthetic treemap layout when no
measurements are available.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .dom import DomTree, NodePath, PathResolutionError, node_path, resolve_path


class GeometryError(ValueError):
    """Malformed or unresolvable measurements."""


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if self.w < 0 or self.h < 0:
            raise GeometryError(f"negative rect dimensions: {self}")

    @property
    def area(self) -> float:
        return self.w * self.h

    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2, self.y + self.h / 2)

    def intersect(self, other: "Rect") -> Optional["Rect"]:
        x0 = max(self.x, other.x)
        y0 = max(self.y, other.y)
        x1 = min(self.x + self.w, other.x + other.w)
        y1 = min(self.y + self.h, other.y + other.h)
        if x1 <= x0 or y1 <= y0:
            return None
        return Rect(x0, y0, x1 - x0, y1 - y0)


@dataclass(frozen=True)
class Viewport:
    w: float
    h: float
    scroll_x: float = 0.0
    scroll_y: float = 0.0

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise GeometryError(f"viewport must have positive size: {self}")

    def window(self) -> Rect:
        """The currently visible page-coordinate rectangle."""
        return Rect(self.scroll_x, self.scroll_y, self.w, self.h)


@dataclass(frozen=True)
class Measurement:
    """Browser-reported border-box geometry for one element."""

    path: NodePath
    rect: Rect
    scroll_w: float = 0.0
    scroll_h: float = 0.0
    visible: bool = True


@dataclass(frozen=True)
class GeometryMap:
    rects: dict[NodePath, Rect]
    viewport: Viewport
    page_w: float
    page_h: float
    source: str  # "measured" | "synthetic"


def ingest_geometry(tree: DomTree, measurements: Sequence[Measurement],
                    viewport: Viewport) -> GeometryMap:
    """Turn browser measurements into effective per-node rectangles.

    A measured rect is expanded to its scroll extents when overflow is
    reported. Hidden or unmeasured nodes get a 1x1 epsilon footprint
    centered on their parent's effective rect, so they stay discoverable
    when cropping is off.
    """
    bad = [m.path for m in measurements
           if not _resolvable(tree, m.path)]
    if bad:
        raise GeometryError(
            "unresolvable measurement paths: "
            + ", ".join(str(list(p)) for p in bad))
    for m in measurements:
        if m.scroll_w < 0 or m.scroll_h < 0:
            raise GeometryError(f"malformed measurement: {m}")

    measured = {tuple(m.path): m for m in measurements}
    rects: dict[NodePath, Rect] = {}
    page_w = 0.0
    page_h = 0.0
    # preorder: parents are assigned before their children
    for nid in tree.iter_ids():
        path = node_path(tree, nid)
        m = measured.get(path)
        if m is not None and m.visible and m.rect.area > 0:
            w = m.scroll_w if m.scroll_w > 0 else m.rect.w
            h = m.scroll_h if m.scroll_h > 0 else m.rect.h
            rect = Rect(m.rect.x, m.rect.y, max(w, m.rect.w), max(h, m.rect.h))
        else:
            if path:
                cx, cy = rects[path[:-1]].center()
            else:
                cx, cy = viewport.window().center()
            rect = Rect(cx - 0.5, cy - 0.5, 1.0, 1.0)
        rects[path] = rect
        page_w = max(page_w, rect.x + rect.w)
        page_h = max(page_h, rect.y + rect.h)
    return GeometryMap(rects=rects, viewport=viewport,
                       page_w=page_w, page_h=page_h, source="measured")


def _resolvable(tree: DomTree, path: NodePath) -> bool:
    try:
        resolve_path(tree, path)
        return True
    except PathResolutionError:
        return False


def synthetic_layout(tree: DomTree, viewport: Viewport) -> GeometryMap:
    """Deterministic slice-and-dice treemap over the viewport.

    The root fills the viewport. At each node the children partition the
    parent rect along the axis alternating with depth (even depth slices
    along x, odd along y), in document order, with area share proportional
    to 1 + descendant count.
    """
    weights: dict[int, int] = {}

    def weigh(nid: int) -> int:
        w = 1 + sum(weigh(c) for c in tree.nodes[nid].children)
        weights[nid] = w
        return w

    weigh(tree.root)

    rects: dict[NodePath, Rect] = {}

    def place(nid: int, path: NodePath, rect: Rect, depth: int) -> None:
        rects[path] = rect
        children = tree.nodes[nid].children
        if not children:
            return
        total = sum(weights[c] for c in children)
        horizontal = depth % 2 == 0
        span = rect.w if horizontal else rect.h
        cum = 0
        lo = 0.0
        for i, cid in enumerate(children):
            cum += weights[cid]
            hi = span * cum / total
            if horizontal:
                child_rect = Rect(rect.x + lo, rect.y, hi - lo, rect.h)
            else:
                child_rect = Rect(rect.x, rect.y + lo, rect.w, hi - lo)
            place(cid, path + (i,), child_rect, depth + 1)
            lo = hi

    place(tree.root, (), Rect(0.0, 0.0, viewport.w, viewport.h), 0)
    return GeometryMap(rects=rects, viewport=viewport,
                       page_w=viewport.w, page_h=viewport.h,
                       source="synthetic")


def crop_rect(rect: Rect, viewport: Viewport,
              cropping: bool) -> Optional[Rect]:
    """Clip a rect to the visible viewport window; None when fully outside.

    With cropping off the rect passes through unchanged, revealing
    content beyond the viewport.
    """
    if not cropping:
        return rect
    return rect.intersect(viewport.window())
