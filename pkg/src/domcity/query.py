"""Filter evaluation: layer range, text search, subtree isolation, cropping.

All filters are conjunctive; the result is the document-ordered set of
visible nodes, which directly drives the scene's box set and the
on-screen element counter.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dom import DomTree, NodePath, node_path, resolve_path, serialize_node
from .geometry import GeometryMap, crop_rect


class FilterError(ValueError):
    """Invalid filter specification."""


@dataclass(frozen=True)
class FilterSpec:
    depth_min: int = 0
    depth_max: Optional[int] = None  # None = no upper bound
    search: str = ""
    subtree_root: Optional[NodePath] = None
    cropping: bool = True

    def __post_init__(self):
        if self.depth_min < 0:
            raise FilterError(f"depth_min must be >= 0, got {self.depth_min}")
        if self.depth_max is not None and self.depth_max < self.depth_min:
            raise FilterError(
                f"depth bounds out of order: [{self.depth_min}, {self.depth_max}]")


def match_search(text: str, query: str) -> bool:
    """Case-insensitive literal substring match; empty query matches all."""
    return query.lower() in text.lower()


def subtree_ids(tree: DomTree, root: NodePath) -> set[int]:
    """The node at `root` and all of its descendants."""
    start = resolve_path(tree, root)
    out: set[int] = set()
    stack = [start]
    while stack:
        nid = stack.pop()
        out.add(nid)
        stack.extend(tree.nodes[nid].children)
    return out


def apply_filters(tree: DomTree, geom: GeometryMap,
                  spec: FilterSpec) -> list[int]:
    """Document-ordered node ids passing every active filter.

    A node passes iff its depth is within bounds, its serialized match
    text contains the search query, it belongs to the isolated subtree
    (when one is set), and — with cropping on — its rect intersects the
    viewport window.
    """
    allowed = None
    if spec.subtree_root is not None:
        allowed = subtree_ids(tree, spec.subtree_root)
    out: list[int] = []
    for nid in tree.iter_ids():
        node = tree.nodes[nid]
        if node.depth < spec.depth_min:
            continue
        if spec.depth_max is not None and node.depth > spec.depth_max:
            continue
        if allowed is not None and nid not in allowed:
            continue
        if spec.search and not match_search(serialize_node(tree, nid),
                                            spec.search):
            continue
        if spec.cropping:
            rect = geom.rects[node_path(tree, nid)]
            if crop_rect(rect, geom.viewport, True) is None:
                continue
        out.append(nid)
    return out
