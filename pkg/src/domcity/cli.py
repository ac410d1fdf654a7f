"""Command line interface: `domcity serve` and `domcity export`.

Exit codes: 0 success, 1 usage error, 2 input unreadable.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .geometry import Viewport
from .query import FilterSpec
from .scene import StyleConfig, build_scene
from .serialize import serialize_scene
from .service import (DEFAULT_VIEWPORT, FileWatcher, Session, Snapshot,
                      create_app)


class InputUnreadable(click.ClickException):
    exit_code = 2


_TEXTURE_MODES = {"none": "none", "leaves": "leaves-only", "all": "all-boxes"}


def _style_options(fn):
    fn = click.option("--layer-gap", type=float, default=1.0,
                      show_default=True,
                      help="World-space distance between depth layers.")(fn)
    fn = click.option("--color-mode",
                      type=click.Choice(["per-layer", "tag-hash"]),
                      default="per-layer", show_default=True)(fn)
    fn = click.option("--texture-mode",
                      type=click.Choice(sorted(_TEXTURE_MODES)),
                      default="none", show_default=True)(fn)
    fn = click.option("--no-crop", is_flag=True,
                      help="Disable viewport cropping.")(fn)
    fn = click.option("--query", default="",
                      help="Text search filter applied to match text.")(fn)
    fn = click.option("--viewport", default="1280x800", show_default=True,
                      help="Synthetic layout viewport, WxH in CSS pixels.")(fn)
    return fn


def _parse_viewport(value: str) -> Viewport:
    try:
        w, h = value.lower().split("x")
        return Viewport(w=float(w), h=float(h))
    except (ValueError, TypeError):
        raise click.UsageError(f"bad viewport {value!r}, expected WxH")


def _build_style(layer_gap, color_mode, texture_mode) -> StyleConfig:
    try:
        return StyleConfig(layer_gap=layer_gap, color_mode=color_mode,
                           texture_mode=_TEXTURE_MODES[texture_mode])
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _read_input(path: str) -> str:
    try:
        return Path(path).read_bytes().decode("utf-8", errors="replace")
    except OSError as exc:
        raise InputUnreadable(f"cannot read {path}: {exc}")


@click.group()
def cli():
    """Layered 3D city visualization of HTML document structure."""


@cli.command()
@click.option("--port", type=int, default=8020, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--input", "input_file", type=str, default=None,
              help="HTML file to load at startup.")
@click.option("--url", default=None, help="URL to fetch at startup "
              "(plain fetch, no script execution; synthetic layout).")
@click.option("--watch", is_flag=True,
              help="Poll --input for changes and republish.")
@click.option("--manual-refresh", is_flag=True,
              help="Stage snapshots until POST /refresh.")
@_style_options
def serve(port, host, input_file, url, watch, manual_refresh,
          layer_gap, color_mode, texture_mode, no_crop, query, viewport):
    """Run the scene service."""
    if input_file and url:
        raise click.UsageError("--input and --url are mutually exclusive")
    if watch and not input_file:
        raise click.UsageError("--watch requires --input")
    vp = _parse_viewport(viewport)
    session = Session(
        style=_build_style(layer_gap, color_mode, texture_mode),
        filter_spec=FilterSpec(search=query, cropping=not no_crop),
        update_mode="manual" if manual_refresh else "continuous",
    )
    watcher = None
    if input_file:
        watcher = FileWatcher(input_file, session)
        try:
            watcher.load_once()
        except OSError as exc:
            raise InputUnreadable(f"cannot read {input_file}: {exc}")
    elif url:
        import requests

        try:
            resp = requests.get(url, timeout=30)
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise InputUnreadable(f"cannot fetch {url}: {exc}")
        session.handle_snapshot(
            Snapshot(html=resp.text, viewport=vp, origin="url"))
    if watch and watcher is not None:
        watcher.start()

    import uvicorn

    uvicorn.run(create_app(session), host=host, port=port, log_level="warning")


@cli.command()
@click.option("--input", "input_file", required=True,
              help="HTML file to visualize.")
@click.option("--out", "out_file", required=True,
              help="Destination scene JSON file.")
@_style_options
def export(input_file, out_file, layer_gap, color_mode, texture_mode,
           no_crop, query, viewport):
    """Build a scene from an HTML file and write canonical scene JSON."""
    html = _read_input(input_file)
    style = _build_style(layer_gap, color_mode, texture_mode)
    vp = _parse_viewport(viewport)
    session = Session(style=style,
                      filter_spec=FilterSpec(search=query,
                                             cropping=not no_crop))
    session.handle_snapshot(Snapshot(html=html, viewport=vp, origin="file"))
    data = serialize_scene(session.scene, style)
    try:
        Path(out_file).write_bytes(data)
    except OSError as exc:
        raise click.ClickException(f"cannot write {out_file}: {exc}")
    click.echo(f"wrote {out_file}: {session.scene.visible_count} boxes, "
               f"revision {session.scene.revision}")


def entry(argv=None) -> int:
    """Entry point with the documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except InputUnreadable as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.exceptions.Abort:
        return 1


if __name__ == "__main__":
    sys.exit(entry())
