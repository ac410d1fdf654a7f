"""Canonical JSON serialization for scenes, diffs and snapshots.

Field order is fixed and floats are written with 6 significant digits,
so export -> parse -> export is byte-identical. The scene document is
the single wire/file schema shared by the HTTP service, the CLI export
command, and the viewer.
"""
from __future__ import annotations

import base64
import json
from typing import Any, Optional

from .geometry import GeometryError, Measurement, Rect, Viewport
from .scene import ConnectorLine, Scene, SceneBox, SceneDiff, StyleConfig


def fmt_float(x: float) -> str:
    """6-significant-digit float formatting, stable under re-parsing."""
    if x == int(x) and abs(x) < 1e6:
        return str(int(x))
    return format(x, ".6g")


def _emit(value: Any) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(
            f"{json.dumps(k)}:{_emit(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value)!r}")


def _box_doc(box: SceneBox) -> dict:
    return {
        "path": list(box.path),
        "pos": list(box.position),
        "size": list(box.size),
        "color": list(box.color),
        "uv": list(box.uv) if box.uv is not None else None,
        "depth": box.depth,
        "match_text": box.match_text,
    }


def _box_from_doc(doc: dict) -> SceneBox:
    return SceneBox(
        path=tuple(doc["path"]),
        position=tuple(float(v) for v in doc["pos"]),
        size=tuple(float(v) for v in doc["size"]),
        color=tuple(float(v) for v in doc["color"]),
        uv=tuple(float(v) for v in doc["uv"]) if doc["uv"] is not None else None,
        match_text=doc["match_text"],
        depth=doc["depth"],
    )


def scene_to_doc(scene: Scene, style: StyleConfig) -> dict:
    return {
        "revision": scene.revision,
        "style": {
            "layer_gap": float(style.layer_gap),
            "box_height": float(style.box_height),
            "color_mode": style.color_mode,
            "texture_mode": style.texture_mode,
            "world_scale": float(style.world_scale),
        },
        "boxes": [_box_doc(b) for b in scene.boxes],
        "lines": [{
            "from": list(ln.from_path),
            "to": list(ln.to_path),
            "a": list(ln.a),
            "b": list(ln.b),
        } for ln in scene.lines],
        "visible_count": scene.visible_count,
        "max_depth": scene.max_depth,
        "screenshot_ref": scene.screenshot_ref,
    }


def scene_from_doc(doc: dict) -> tuple[Scene, StyleConfig]:
    style = StyleConfig(
        layer_gap=float(doc["style"]["layer_gap"]),
        box_height=float(doc["style"]["box_height"]),
        color_mode=doc["style"]["color_mode"],
        texture_mode=doc["style"]["texture_mode"],
        world_scale=float(doc["style"]["world_scale"]),
    )
    boxes = tuple(_box_from_doc(b) for b in doc["boxes"])
    lines = tuple(ConnectorLine(
        from_path=tuple(ln["from"]),
        to_path=tuple(ln["to"]),
        a=tuple(float(v) for v in ln["a"]),
        b=tuple(float(v) for v in ln["b"]),
    ) for ln in doc["lines"])
    scene = Scene(boxes=boxes, lines=lines,
                  visible_count=doc["visible_count"],
                  revision=doc["revision"],
                  max_depth=doc["max_depth"],
                  screenshot_ref=doc["screenshot_ref"])
    return scene, style


def serialize_scene(scene: Scene, style: StyleConfig) -> bytes:
    return (_emit(scene_to_doc(scene, style)) + "\n").encode("utf-8")


def parse_scene(data: bytes | str) -> tuple[Scene, StyleConfig]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return scene_from_doc(json.loads(data))


def diff_to_doc(diff: SceneDiff) -> dict:
    return {
        "type": "diff",
        "base_revision": diff.base_revision,
        "target_revision": diff.target_revision,
        "added": [_box_doc(b) for b in diff.added],
        "removed": [list(p) for p in diff.removed],
        "changed": [_box_doc(b) for b in diff.changed],
        "max_depth": diff.max_depth,
        "screenshot_ref": diff.screenshot_ref,
    }


def diff_from_doc(doc: dict) -> SceneDiff:
    return SceneDiff(
        base_revision=doc["base_revision"],
        target_revision=doc["target_revision"],
        added=tuple(_box_from_doc(b) for b in doc["added"]),
        removed=tuple(tuple(p) for p in doc["removed"]),
        changed=tuple(_box_from_doc(b) for b in doc["changed"]),
        max_depth=doc["max_depth"],
        screenshot_ref=doc["screenshot_ref"],
    )


def serialize_diff(diff: SceneDiff) -> str:
    return _emit(diff_to_doc(diff))


def measurements_from_doc(items: list) -> list[Measurement]:
    out = []
    for item in items:
        rect = item.get("rect")
        if not isinstance(rect, (list, tuple)) or len(rect) != 4:
            raise GeometryError(f"malformed measurement rect: {rect!r}")
        out.append(Measurement(
            path=tuple(item["path"]),
            rect=Rect(*(float(v) for v in rect)),
            scroll_w=float(item.get("scroll_w", 0.0)),
            scroll_h=float(item.get("scroll_h", 0.0)),
            visible=bool(item.get("visible", True)),
        ))
    return out


def viewport_from_doc(doc: dict) -> Viewport:
    return Viewport(
        w=float(doc["w"]),
        h=float(doc["h"]),
        scroll_x=float(doc.get("scroll_x", 0.0)),
        scroll_y=float(doc.get("scroll_y", 0.0)),
    )


def decode_screenshot(b64: Optional[str]) -> Optional[bytes]:
    if not b64:
        return None
    return base64.b64decode(b64)
