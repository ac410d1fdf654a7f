"""domcity: layered 3D city visualization of HTML document structure."""

from .dom import (DomNode, DomTree, NodePath, PathResolutionError,
                  UnknownNodeError, node_path, parse_html, resolve_path,
                  serialize_node)
from .geometry import (GeometryError, GeometryMap, Measurement, Rect,
                       Viewport, crop_rect, ingest_geometry, synthetic_layout)
from .query import FilterSpec, FilterError, apply_filters, match_search, subtree_ids
from .scene import (ConnectorLine, Scene, SceneBox, SceneDiff, SceneError,
                    StyleConfig, apply_diff, build_scene, color_for,
                    diff_scenes, fnv1a_64, texture_uv)
from .service import FileWatcher, Session, Snapshot, create_app

__version__ = "0.1.0"

__all__ = [
    "DomNode", "DomTree", "NodePath", "PathResolutionError",
    "UnknownNodeError", "node_path", "parse_html", "resolve_path",
    "serialize_node",
    "GeometryError", "GeometryMap", "Measurement", "Rect", "Viewport",
    "crop_rect", "ingest_geometry", "synthetic_layout",
    "FilterSpec", "FilterError", "apply_filters", "match_search",
    "subtree_ids",
    "ConnectorLine", "Scene", "SceneBox", "SceneDiff", "SceneError",
    "StyleConfig", "apply_diff", "build_scene", "color_for", "diff_scenes",
    "fnv1a_64", "texture_uv",
    "FileWatcher", "Session", "Snapshot", "create_app",
]
