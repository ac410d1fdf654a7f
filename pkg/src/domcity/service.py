"""Session state, snapshot ingestion, file watching, and the HTTP service.

A single writer mutates the session; every published scene is an
immutable value, so concurrent readers and update-stream subscribers
never observe a half-built state.
"""
from __future__ import annotations

import hashlib
import logging
import queue
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from fastapi import WebSocket, WebSocketDisconnect

from .dom import DomTree, parse_html
from .geometry import (GeometryError, GeometryMap, Measurement, Viewport,
                       ingest_geometry, synthetic_layout)
from .query import FilterSpec
from .scene import Scene, SceneDiff, StyleConfig, build_scene, diff_scenes

log = logging.getLogger("domcity")

DEFAULT_VIEWPORT = Viewport(w=1280.0, h=800.0)


@dataclass(frozen=True)
class Snapshot:
    """One captured page state: the engine's unit of ingestion."""

    html: str
    measurements: Optional[list[Measurement]] = None
    viewport: Optional[Viewport] = None
    screenshot: Optional[bytes] = None
    page_w: Optional[float] = None
    page_h: Optional[float] = None
    origin: str = "file"  # file | url | live-push

    def __post_init__(self):
        if self.measurements is not None and self.viewport is None:
            raise GeometryError("measurements require a viewport")


class Session:
    """Holds the current tree/geometry/filter/style and publishes scenes.

    Revisions increase strictly by one per published scene; the published
    scene always equals a from-scratch build over the current inputs.
    """

    def __init__(self, style: Optional[StyleConfig] = None,
                 filter_spec: Optional[FilterSpec] = None,
                 update_mode: str = "continuous"):
        if update_mode not in ("continuous", "manual"):
            raise ValueError(f"unknown update mode: {update_mode}")
        self.style = style or StyleConfig()
        self.filter = filter_spec or FilterSpec()
        self.update_mode = update_mode
        self.tree: Optional[DomTree] = None
        self.geometry: Optional[GeometryMap] = None
        self.scene = Scene(boxes=(), lines=(), visible_count=0,
                           revision=0, max_depth=0)
        self.screenshots: dict[str, bytes] = {}
        self._staged: Optional[Snapshot] = None
        self._screenshot_ref: Optional[str] = None
        self._subscribers: list[Callable[[SceneDiff], None]] = []
        self._lock = threading.Lock()

    # -- subscriptions -------------------------------------------------------

    def subscribe(self, callback: Callable[[SceneDiff], None]) -> None:
        with self._lock:
            self._subscribers.append(callback)

    def unsubscribe(self, callback: Callable[[SceneDiff], None]) -> None:
        with self._lock:
            if callback in self._subscribers:
                self._subscribers.remove(callback)

    def _publish(self, new_scene: Scene) -> SceneDiff:
        diff = diff_scenes(self.scene, new_scene)
        self.scene = new_scene
        for cb in list(self._subscribers):
            cb(diff)
        return diff

    # -- operations ----------------------------------------------------------

    def handle_snapshot(self, snap: Snapshot) -> Optional[SceneDiff]:
        """Ingest a snapshot; in manual mode it is staged until refresh."""
        with self._lock:
            if self.update_mode == "manual":
                self._staged = snap  # last write wins
                return None
            return self._apply_snapshot(snap)

    def refresh(self) -> SceneDiff:
        """Apply the latest staged snapshot; empty diff when none staged."""
        with self._lock:
            if self._staged is None:
                # nothing staged: no publication, revision unchanged
                return SceneDiff(
                    base_revision=self.scene.revision,
                    target_revision=self.scene.revision,
                    added=(), removed=(), changed=(),
                    max_depth=self.scene.max_depth,
                    screenshot_ref=self.scene.screenshot_ref)
            snap, self._staged = self._staged, None
            return self._apply_snapshot(snap)

    def set_filter(self, filter_spec: FilterSpec) -> SceneDiff:
        """Rebuild the scene under a new filter; tree/geometry unchanged."""
        with self._lock:
            self.filter = filter_spec
            return self._rebuild()

    def set_style(self, style: StyleConfig) -> SceneDiff:
        with self._lock:
            self.style = style
            return self._rebuild()

    def _rebuild(self) -> SceneDiff:
        if self.tree is None or self.geometry is None:
            new = Scene(boxes=(), lines=(), visible_count=0,
                        revision=self.scene.revision + 1, max_depth=0)
            return self._publish(new)
        new = build_scene(self.tree, self.geometry, self.filter, self.style,
                          revision=self.scene.revision + 1,
                          screenshot_ref=self._screenshot_ref)
        return self._publish(new)

    def _apply_snapshot(self, snap: Snapshot) -> SceneDiff:
        tree = parse_html(snap.html)
        viewport = snap.viewport or DEFAULT_VIEWPORT
        if snap.measurements is not None:
            geometry = ingest_geometry(tree, snap.measurements, viewport)
        else:
            geometry = synthetic_layout(tree, viewport)
        ref = None
        if snap.screenshot:
            ref = hashlib.sha256(snap.screenshot).hexdigest()
        # all inputs validated; commit atomically
        self.tree = tree
        self.geometry = geometry
        self._screenshot_ref = ref
        if ref is not None:
            self.screenshots[ref] = snap.screenshot
        return self._rebuild()


class FileWatcher:
    """Polls a file and feeds changed content into the session."""

    def __init__(self, path: str | Path, session: Session,
                 poll_interval: float = 0.5):
        self.path = Path(path)
        self.session = session
        self.poll_interval = poll_interval
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None
        self._last_digest: Optional[str] = None

    def load_once(self) -> Optional[SceneDiff]:
        """Read the file and push a snapshot; raises if unreadable."""
        data = self.path.read_bytes()
        self._last_digest = hashlib.sha256(data).hexdigest()
        return self.session.handle_snapshot(
            Snapshot(html=data.decode("utf-8", errors="replace"),
                     origin="file"))

    def poll(self) -> Optional[SceneDiff]:
        """One poll step: ingest the file when its content changed."""
        try:
            data = self.path.read_bytes()
        except OSError:
            log.warning("watched file unreadable, keeping last scene: %s",
                        self.path)
            return None
        digest = hashlib.sha256(data).hexdigest()
        if digest == self._last_digest:
            return None
        self._last_digest = digest
        return self.session.handle_snapshot(
            Snapshot(html=data.decode("utf-8", errors="replace"),
                     origin="file"))

    def start(self) -> None:
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()

    def _run(self) -> None:
        while not self._stop.wait(self.poll_interval):
            self.poll()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)


def create_app(session: Session):
    """FastAPI application exposing the scene, snapshot ingestion, filter
    and refresh endpoints, screenshots by hash, and the /updates stream."""
    from fastapi import FastAPI, HTTPException
    from fastapi.responses import Response

    from . import serialize

    app = FastAPI(title="domcity")

    def _scene_bytes() -> bytes:
        return serialize.serialize_scene(session.scene, session.style)

    def _diff_response(diff: SceneDiff) -> Response:
        # canonical float formatting, same as the /updates stream
        return Response(content=serialize.serialize_diff(diff),
                        media_type="application/json")

    @app.get("/scene")
    def get_scene():
        return Response(content=_scene_bytes(), media_type="application/json")

    @app.post("/snapshot")
    def post_snapshot(body: dict):
        try:
            snap = snapshot_from_doc(body)
            diff = session.handle_snapshot(snap)
        except (GeometryError, KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if diff is None:
            return {"staged": True}
        return _diff_response(diff)

    @app.post("/filter")
    def post_filter(body: dict):
        try:
            spec = filter_from_doc(body, base=session.filter)
            diff = session.set_filter(spec)
        except (ValueError, KeyError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _diff_response(diff)

    @app.post("/refresh")
    def post_refresh():
        return _diff_response(session.refresh())

    @app.get("/screenshot/{ref}")
    def get_screenshot(ref: str):
        data = session.screenshots.get(ref)
        if data is None:
            raise HTTPException(status_code=404, detail="unknown screenshot")
        return Response(content=data, media_type="image/png")

    @app.websocket("/updates")
    async def updates(ws: WebSocket):
        import asyncio
        import json as _json

        await ws.accept()
        loop = asyncio.get_running_loop()
        outbox: asyncio.Queue = asyncio.Queue()

        def on_diff(diff: SceneDiff) -> None:
            loop.call_soon_threadsafe(outbox.put_nowait,
                                      serialize.serialize_diff(diff))

        session.subscribe(on_diff)

        async def sender():
            while True:
                await ws.send_text(await outbox.get())

        task = asyncio.create_task(sender())
        try:
            while True:
                frame = _json.loads(await ws.receive_text())
                kind = frame.get("type")
                if kind == "snapshot":
                    session.handle_snapshot(snapshot_from_doc(frame))
                elif kind == "filter":
                    session.set_filter(
                        filter_from_doc(frame, base=session.filter))
                elif kind == "refresh":
                    session.refresh()
        except WebSocketDisconnect:
            pass
        finally:
            task.cancel()
            session.unsubscribe(on_diff)

    return app


def snapshot_from_doc(doc: dict) -> Snapshot:
    from . import serialize

    measurements = None
    if doc.get("measurements") is not None:
        measurements = serialize.measurements_from_doc(doc["measurements"])
    viewport = None
    if doc.get("viewport") is not None:
        viewport = serialize.viewport_from_doc(doc["viewport"])
    return Snapshot(
        html=doc["html"],
        measurements=measurements,
        viewport=viewport,
        screenshot=serialize.decode_screenshot(doc.get("screenshot")),
        page_w=doc.get("page_w"),
        page_h=doc.get("page_h"),
        origin=doc.get("origin", "live-push"),
    )


def filter_from_doc(doc: dict, base: FilterSpec) -> FilterSpec:
    subtree = doc.get("subtree_root", list(base.subtree_root)
                      if base.subtree_root is not None else None)
    return FilterSpec(
        depth_min=int(doc.get("depth_min", base.depth_min)),
        depth_max=(int(doc["depth_max"])
                   if doc.get("depth_max") is not None
                   else (base.depth_max if "depth_max" not in doc else None)),
        search=doc.get("search", base.search),
        subtree_root=tuple(subtree) if subtree is not None else None,
        cropping=bool(doc.get("cropping", base.cropping)),
    )
