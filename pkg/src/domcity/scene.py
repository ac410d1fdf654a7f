"""Scene construction: layered 3D boxes, connector lines, colors, diffs.

Axis mapping: page x -> world x, page y -> world z, DOM depth -> world +y.
Every box sits at y = depth * layer_gap, so each DOM layer forms one
horizontal slab of the city.
"""
from __future__ import annotations

import colorsys
from dataclasses import dataclass, replace
from typing import Optional

from .dom import DomNode, DomTree, node_path, serialize_node
from .geometry import GeometryMap, Rect, crop_rect
from .dom import NodePath
from .query import FilterSpec, apply_filters


class SceneError(ValueError):
    pass


@dataclass(frozen=True)
class StyleConfig:
    layer_gap: float = 1.0
    box_height: float = 0.2
    color_mode: str = "per-layer"  # per-layer | tag-hash
    texture_mode: str = "none"  # none | leaves-only | all-boxes
    world_scale: float = 0.001

    def __post_init__(self):
        if self.layer_gap <= 0 or self.box_height <= 0 or self.world_scale <= 0:
            raise SceneError(f"style scalars must be positive: {self}")
        if self.color_mode not in ("per-layer", "tag-hash"):
            raise SceneError(f"unknown color mode: {self.color_mode}")
        if self.texture_mode not in ("none", "leaves-only", "all-boxes"):
            raise SceneError(f"unknown texture mode: {self.texture_mode}")


@dataclass(frozen=True)
class SceneBox:
    path: NodePath
    position: tuple[float, float, float]
    size: tuple[float, float, float]
    color: tuple[float, float, float]
    uv: Optional[tuple[float, float, float, float]]
    match_text: str
    depth: int


@dataclass(frozen=True)
class ConnectorLine:
    from_path: NodePath
    to_path: NodePath
    a: tuple[float, float, float]  # top-center of child box
    b: tuple[float, float, float]  # bottom-center of parent box


@dataclass(frozen=True)
class Scene:
    boxes: tuple[SceneBox, ...]
    lines: tuple[ConnectorLine, ...]
    visible_count: int
    revision: int
    max_depth: int
    screenshot_ref: Optional[str] = None


@dataclass(frozen=True)
class SceneDiff:
    base_revision: int
    target_revision: int
    added: tuple[SceneBox, ...]
    removed: tuple[NodePath, ...]
    changed: tuple[SceneBox, ...]
    # scene-level fields carried so applying a diff reproduces the
    # target scene exactly
    max_depth: int = 0
    screenshot_ref: Optional[str] = None

    def is_empty(self) -> bool:
        return not (self.added or self.removed or self.changed)


#: Fixed categorical palette indexed by depth mod 12 (per-layer mode).
LAYER_PALETTE: tuple[tuple[float, float, float], ...] = (
    (0.122, 0.467, 0.706),
    (1.000, 0.498, 0.055),
    (0.173, 0.627, 0.173),
    (0.839, 0.153, 0.157),
    (0.580, 0.404, 0.741),
    (0.549, 0.337, 0.294),
    (0.890, 0.467, 0.761),
    (0.498, 0.498, 0.498),
    (0.737, 0.741, 0.133),
    (0.090, 0.745, 0.812),
    (0.682, 0.780, 0.910),
    (1.000, 0.733, 0.471),
)

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a_64(data: str) -> int:
    """64-bit FNV-1a over the UTF-8 bytes; stable across platforms."""
    h = _FNV_OFFSET
    for byte in data.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def color_for(node: DomNode, mode: str) -> tuple[float, float, float]:
    """Box color: shared per layer, or derived from the tag name hash."""
    if mode == "per-layer":
        return LAYER_PALETTE[node.depth % 12]
    hue = fnv1a_64(node.tag.lower()) % 360
    r, g, b = colorsys.hls_to_rgb(hue / 360.0, 0.55, 0.65)
    return (r, g, b)


def texture_uv(rect: Rect, page_w: float,
               page_h: float) -> tuple[float, float, float, float]:
    """Normalized screenshot coordinates for a page rect, v flipped so the
    image top maps to the page top. Components clamped to [0, 1]."""
    if rect.w <= 0 or rect.h <= 0:
        raise SceneError(f"degenerate texture region: {rect}")
    clamp = lambda v: min(1.0, max(0.0, v))
    u0 = clamp(rect.x / page_w)
    u1 = clamp((rect.x + rect.w) / page_w)
    v0 = clamp(1.0 - (rect.y + rect.h) / page_h)
    v1 = clamp(1.0 - rect.y / page_h)
    return (u0, v0, u1, v1)


def build_scene(tree: DomTree, geom: GeometryMap, filt: FilterSpec,
                style: StyleConfig, revision: int = 0,
                screenshot_ref: Optional[str] = None) -> Scene:
    """Map every filtered node to a box; connect child boxes to their
    parent box when both survive the filter."""
    visible = apply_filters(tree, geom, filt)
    boxes: list[SceneBox] = []
    by_path: dict[NodePath, SceneBox] = {}
    for nid in visible:
        node = tree.nodes[nid]
        path = node_path(tree, nid)
        full = geom.rects.get(path)
        if full is None:
            raise SceneError(f"geometry missing for node at {list(path)}")
        rect = crop_rect(full, geom.viewport, filt.cropping)
        if rect is None:
            continue
        ws = style.world_scale
        uv = None
        if style.texture_mode == "all-boxes" or (
                style.texture_mode == "leaves-only" and not node.children):
            uv = texture_uv(rect, geom.page_w, geom.page_h)
        box = SceneBox(
            path=path,
            position=(ws * (rect.x + rect.w / 2),
                      node.depth * style.layer_gap,
                      ws * (rect.y + rect.h / 2)),
            size=(ws * rect.w, style.box_height, ws * rect.h),
            color=color_for(node, style.color_mode),
            uv=uv,
            match_text=serialize_node(tree, nid),
            depth=node.depth,
        )
        boxes.append(box)
        by_path[path] = box
    lines = _connect(boxes, by_path)
    return Scene(boxes=tuple(boxes), lines=lines,
                 visible_count=len(boxes), revision=revision,
                 max_depth=tree.max_depth, screenshot_ref=screenshot_ref)


def _connect(boxes: list[SceneBox],
             by_path: dict[NodePath, SceneBox]) -> tuple[ConnectorLine, ...]:
    lines = []
    for box in boxes:
        if not box.path:
            continue
        parent = by_path.get(box.path[:-1])
        if parent is None:
            continue
        lines.append(ConnectorLine(
            from_path=box.path,
            to_path=parent.path,
            a=(box.position[0], box.position[1] + box.size[1] / 2,
               box.position[2]),
            b=(parent.position[0], parent.position[1] - parent.size[1] / 2,
               parent.position[2]),
        ))
    return tuple(lines)


def diff_scenes(old: Scene, new: Scene) -> SceneDiff:
    """Key boxes by node path; classify as added/removed/changed."""
    if old.revision >= new.revision:
        raise SceneError(
            f"revision order violated: {old.revision} >= {new.revision}")
    old_by = {b.path: b for b in old.boxes}
    new_by = {b.path: b for b in new.boxes}
    added = tuple(b for b in new.boxes if b.path not in old_by)
    removed = tuple(b.path for b in old.boxes if b.path not in new_by)
    changed = tuple(b for b in new.boxes
                    if b.path in old_by and old_by[b.path] != b)
    return SceneDiff(base_revision=old.revision,
                     target_revision=new.revision,
                     added=added, removed=removed, changed=changed,
                     max_depth=new.max_depth,
                     screenshot_ref=new.screenshot_ref)


def apply_diff(old: Scene, diff: SceneDiff) -> Scene:
    """Replay a diff onto its base scene, reproducing the target exactly.

    Lines are recomputed from the resulting box set; they are fully
    determined by box positions and the parent-path relation.
    """
    if diff.base_revision != old.revision:
        raise SceneError(
            f"diff base {diff.base_revision} does not match "
            f"scene revision {old.revision}")
    by_path = {b.path: b for b in old.boxes}
    for path in diff.removed:
        by_path.pop(path, None)
    for b in diff.added:
        by_path[b.path] = b
    for b in diff.changed:
        by_path[b.path] = b
    boxes = sorted(by_path.values(), key=lambda b: b.path)
    lines = _connect(boxes, {b.path: b for b in boxes})
    return Scene(boxes=tuple(boxes), lines=lines,
                 visible_count=len(boxes),
                 revision=diff.target_revision,
                 max_depth=diff.max_depth,
                 screenshot_ref=diff.screenshot_ref)
