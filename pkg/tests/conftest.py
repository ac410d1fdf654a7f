import json
import random
import shutil
import subprocess
from pathlib import Path

import pytest

from domcity import Viewport, parse_html

DATA = Path(__file__).parent / "data"
CORPUS = sorted((DATA / "corpus").glob("*.html"))
ORACLE_JS = Path(__file__).parent / "parse5_oracle" / "extract.js"

# tags that nest without implicit-close side effects
SAFE_TAGS = ["div", "span", "section", "article", "nav", "em",
             "strong", "b", "i", "code", "main", "aside"]
LEAF_TAGS = ["img", "br", "hr", "input"]
WORDS = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta",
         "theta", "content", "nested", "layout", "widget"]


class DocNode:
    """Mutable document model used to generate and mutate random HTML."""

    def __init__(self, tag, attrs=None, text="", children=None):
        self.tag = tag
        self.attrs = attrs or {}
        self.text = text
        self.children = children or []

    def render(self):
        attrs = "".join(f' {k}="{v}"' for k, v in self.attrs.items())
        if self.tag in LEAF_TAGS:
            return f"<{self.tag}{attrs}>"
        inner = self.text + "".join(c.render() for c in self.children)
        return f"<{self.tag}{attrs}>{inner}</{self.tag}>"

    def all_nodes(self):
        out = [self]
        for c in self.children:
            out.extend(c.all_nodes())
        return out


def random_doc(rng: random.Random, max_nodes: int = 60) -> DocNode:
    """Random element tree; rendered inside an implied body."""
    root = DocNode("div", {"id": "root"})
    nodes = [root]
    total = 1
    target = rng.randint(1, max_nodes)
    while total < target:
        total += 1
        parent = rng.choice(nodes)
        if rng.random() < 0.15:
            child = DocNode(rng.choice(LEAF_TAGS),
                            {"class": rng.choice(WORDS)})
        else:
            attrs = {}
            if rng.random() < 0.5:
                attrs["class"] = " ".join(
                    rng.sample(WORDS, rng.randint(1, 2)))
            if rng.random() < 0.3:
                attrs["id"] = f"n{len(nodes)}"
            child = DocNode(rng.choice(SAFE_TAGS), attrs,
                            text=rng.choice(WORDS) if rng.random() < 0.4 else "")
        parent.children.append(child)
        if child.tag not in LEAF_TAGS:
            nodes.append(child)
    return root


def mutate_doc(rng: random.Random, doc: DocNode) -> None:
    """Apply one random structural or attribute mutation in place."""
    nodes = doc.all_nodes()
    op = rng.random()
    if op < 0.3:  # insert
        parent = rng.choice(nodes)
        parent.children.insert(
            rng.randint(0, len(parent.children)),
            DocNode(rng.choice(SAFE_TAGS), {"class": rng.choice(WORDS)},
                    text=rng.choice(WORDS)))
    elif op < 0.55 and len(nodes) > 1:  # delete a subtree
        victim = rng.choice(nodes[1:])
        for n in nodes:
            if victim in n.children:
                n.children.remove(victim)
                break
    elif op < 0.75:  # change attribute
        node = rng.choice(nodes)
        node.attrs["class"] = rng.choice(WORDS)
    elif op < 0.9:  # change text
        node = rng.choice(nodes)
        if node.tag not in LEAF_TAGS:
            node.text = rng.choice(WORDS)
    else:  # retag
        node = rng.choice(nodes)
        if node.tag not in LEAF_TAGS:
            node.tag = rng.choice(SAFE_TAGS)


def random_tree(rng: random.Random, max_nodes: int = 60):
    return parse_html(random_doc(rng, max_nodes).render())


def parse5_reference(html: str):
    """(tag, depth) list per element, from the reference HTML5 parser."""
    proc = subprocess.run(
        ["node", str(ORACLE_JS)], input=html,
        capture_output=True, text=True, check=True)
    return [(e["tag"], e["depth"]) for e in json.loads(proc.stdout)]


node_available = shutil.which("node") is not None

requires_node = pytest.mark.skipif(
    not node_available, reason="node/parse5 reference parser unavailable")


@pytest.fixture
def viewport():
    return Viewport(w=1000.0, h=800.0)


@pytest.fixture(params=[p.name for p in CORPUS])
def corpus_doc(request):
    path = DATA / "corpus" / request.param
    return path.read_text()
