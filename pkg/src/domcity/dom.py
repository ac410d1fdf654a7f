"""HTML document parsing into an element tree with stable paths.

Only element nodes are kept; text content of immediate text children is
folded into the owning element. Comments, doctypes and processing
instructions are dropped. The implied document skeleton (html/head/body)
is always materialized, so parsing "" yields three elements.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterator, Optional, Sequence

NodePath = tuple[int, ...]

#: Elements that never have a closing tag (HTML living standard).
VOID_ELEMENTS = frozenset({
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
})

#: Elements that belong in <head> when seen before body content starts.
_HEAD_ELEMENTS = frozenset({
    "base", "link", "meta", "title", "style", "script", "noscript", "template",
})

#: Start tags that implicitly close an open <p>.
_P_CLOSERS = frozenset({
    "address", "article", "aside", "blockquote", "details", "dialog",
    "dir", "div", "dl", "fieldset", "figcaption", "figure", "footer",
    "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hgroup",
    "hr", "main", "menu", "nav", "ol", "p", "pre", "section", "summary",
    "table", "ul", "li", "dt", "dd",
})

_HEADINGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6"})
_TABLE_SECTIONS = frozenset({"thead", "tbody", "tfoot"})

_WS = re.compile(r"\s+")


class UnknownNodeError(KeyError):
    """Raised when a node id is not present in the tree."""


class PathResolutionError(ValueError):
    """Raised when a NodePath cannot be resolved; carries the failing step."""

    def __init__(self, path: NodePath, step_index: int):
        self.path = tuple(path)
        self.step_index = step_index
        super().__init__(
            f"path not resolvable: {list(path)} at step {step_index}"
        )


@dataclass(frozen=True)
class DomNode:
    id: int
    tag: str
    attributes: tuple[tuple[str, str], ...]
    direct_text: str
    children: tuple[int, ...]
    depth: int
    parent: Optional[int]


@dataclass(frozen=True)
class DomTree:
    root: int
    nodes: dict[int, DomNode]
    max_depth: int

    def __len__(self) -> int:
        return len(self.nodes)

    def iter_ids(self) -> Iterator[int]:
        """Node ids in document (preorder) order."""
        stack = [self.root]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(self.nodes[nid].children))

    def node(self, node_id: int) -> DomNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"no such node: {node_id}") from None


class _BuildNode:
    __slots__ = ("tag", "attrs", "texts", "children", "parent")

    def __init__(self, tag: str, attrs, parent: Optional["_BuildNode"]):
        self.tag = tag
        self.attrs = attrs
        self.texts: list[str] = []
        self.children: list[_BuildNode] = []
        self.parent = parent


class _TreeBuilder(HTMLParser):
    """Pragmatic HTML5-style tree construction on the stdlib tokenizer.

    Covers the implied html/head/body skeleton, void elements, and the
    common implicit-close rules (p, li, dt/dd, headings, options, table
    rows and cells, implied tbody). Unmatched end tags are ignored.
    """

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.html: Optional[_BuildNode] = None
        self.head: Optional[_BuildNode] = None
        self.body: Optional[_BuildNode] = None
        # open-element stack; kept below html level only
        self.stack: list[_BuildNode] = []
        self.mode = "before_head"  # before_head | in_head | in_body

    # -- structural helpers -------------------------------------------------

    def _ensure_html(self, attrs=()) -> _BuildNode:
        if self.html is None:
            self.html = _BuildNode("html", self._dedup(attrs), None)
        elif attrs:
            self._merge_attrs(self.html, attrs)
        return self.html

    def _ensure_head(self, attrs=()) -> _BuildNode:
        html = self._ensure_html()
        if self.head is None:
            self.head = _BuildNode("head", self._dedup(attrs), html)
            html.children.append(self.head)
        elif attrs:
            self._merge_attrs(self.head, attrs)
        return self.head

    def _ensure_body(self, attrs=()) -> _BuildNode:
        self._ensure_head()
        if self.body is None:
            html = self._ensure_html()
            self.body = _BuildNode("body", self._dedup(attrs), html)
            html.children.append(self.body)
        elif attrs:
            self._merge_attrs(self.body, attrs)
        self.mode = "in_body"
        return self.body

    @staticmethod
    def _dedup(attrs) -> list[tuple[str, str]]:
        seen: set[str] = set()
        out: list[tuple[str, str]] = []
        for name, value in attrs:
            if name in seen:
                continue
            seen.add(name)
            out.append((name, value if value is not None else ""))
        return out

    @staticmethod
    def _merge_attrs(node: _BuildNode, attrs) -> None:
        present = {n for n, _ in node.attrs}
        for name, value in attrs:
            if name not in present:
                present.add(name)
                node.attrs.append((name, value if value is not None else ""))

    def _current(self) -> _BuildNode:
        if self.stack:
            return self.stack[-1]
        if self.mode == "in_head":
            return self._ensure_head()
        return self._ensure_body()

    def _insert(self, tag: str, attrs, push: bool) -> _BuildNode:
        parent = self._current()
        node = _BuildNode(tag, self._dedup(attrs), parent)
        parent.children.append(node)
        if push:
            self.stack.append(node)
        return node

    def _pop_until(self, tags, inclusive: bool = True,
                   stop: Sequence[str] = ()) -> bool:
        """Pop open elements until one of `tags`; leave stack untouched if
        no match is found before a `stop` tag."""
        for i in range(len(self.stack) - 1, -1, -1):
            t = self.stack[i].tag
            if t in tags:
                del self.stack[i if inclusive else i + 1:]
                return True
            if t in stop:
                return False
        return False

    def _open_tags(self) -> list[str]:
        return [n.tag for n in self.stack]

    # -- tokenizer callbacks -------------------------------------------------

    def handle_starttag(self, tag, attrs):
        if tag == "html":
            self._ensure_html(attrs)
            return
        if tag == "head":
            if self.mode == "before_head":
                self._ensure_head(attrs)
                self.mode = "in_head"
            return
        if tag == "body":
            self._ensure_body(attrs)
            return

        if self.mode == "before_head" and tag in _HEAD_ELEMENTS:
            self._ensure_head()
            self.mode = "in_head"
        if self.mode == "in_head" and tag not in _HEAD_ELEMENTS:
            self._ensure_body()
        if self.mode == "before_head":
            self._ensure_body()

        if self.mode == "in_body":
            self._auto_close(tag)

        self._insert(tag, attrs, push=tag not in VOID_ELEMENTS)

    def handle_startendtag(self, tag, attrs):
        # The trailing slash carries no meaning for HTML elements; treat
        # exactly like a start tag (a "self-closed" div stays open).
        self.handle_starttag(tag, attrs)

    def _auto_close(self, tag: str) -> None:
        open_tags = self._open_tags()
        if tag in _P_CLOSERS and "p" in open_tags:
            self._pop_until({"p"}, stop={"table", "td", "th"})
        if tag == "li":
            self._pop_until({"li"}, stop={"ul", "ol"})
        elif tag in ("dt", "dd"):
            self._pop_until({"dt", "dd"}, stop={"dl"})
        elif tag in _HEADINGS:
            if self.stack and self.stack[-1].tag in _HEADINGS:
                self.stack.pop()
        elif tag in ("option", "optgroup"):
            self._pop_until({"option"}, stop={"select"})
        elif tag in ("td", "th"):
            self._pop_until({"td", "th"}, stop={"tr", "table"})
            open_tags = self._open_tags()
            if "table" in open_tags and "tr" not in open_tags[
                    open_tags.index("table"):]:
                if not any(t in _TABLE_SECTIONS
                           for t in open_tags[open_tags.index("table"):]):
                    self._insert("tbody", (), push=True)
                self._insert("tr", (), push=True)
        elif tag == "tr":
            self._pop_until({"tr"}, stop=_TABLE_SECTIONS | {"table"})
            open_tags = self._open_tags()
            if "table" in open_tags and not any(
                    t in _TABLE_SECTIONS
                    for t in open_tags[open_tags.index("table"):]):
                self._insert("tbody", (), push=True)
        elif tag in _TABLE_SECTIONS or tag in ("caption", "colgroup"):
            self._pop_until({"table"}, inclusive=False)
        elif tag == "a":
            self._pop_until({"a"}, stop={"div", "td", "th", "li"})
        elif tag == "button":
            self._pop_until({"button"}, stop={"div", "td", "th", "li"})

    def handle_endtag(self, tag):
        if tag == "html":
            return
        if tag == "head":
            if self.mode == "in_head":
                self.stack.clear()
                self.mode = "before_head"
            return
        if tag == "body":
            if self.mode == "in_body":
                self.stack.clear()
            return
        if tag in VOID_ELEMENTS:
            return
        self._pop_until({tag})

    def handle_data(self, data):
        if not data:
            return
        if self.mode != "in_body":
            if self.stack:  # inside title/style/script in head
                self.stack[-1].texts.append(data)
                return
            if not data.strip():
                return
            self._ensure_body()
        self._current().texts.append(data)

    # comments, doctype, PIs: dropped
    def handle_comment(self, data):
        pass

    def handle_decl(self, decl):
        pass

    def handle_pi(self, data):
        pass

    def unknown_decl(self, data):
        pass

    def finish(self) -> _BuildNode:
        self._ensure_body()
        return self.html  # type: ignore[return-value]


def _collapse(text: str) -> str:
    return _WS.sub(" ", text).strip()


def parse_html(html: str | bytes) -> DomTree:
    """Parse an HTML document into an element tree.

    Parsing is total: any input yields a tree containing at least the
    implied html/head/body skeleton. Bytes are decoded as UTF-8 with
    replacement of invalid sequences.
    """
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    root = builder.finish()

    nodes: dict[int, DomNode] = {}
    max_depth = 0
    counter = 0

    def freeze(bn: _BuildNode, depth: int, parent: Optional[int]) -> int:
        nonlocal counter, max_depth
        nid = counter
        counter += 1
        max_depth = max(max_depth, depth)
        child_ids = tuple(freeze(c, depth + 1, nid) for c in bn.children)
        nodes[nid] = DomNode(
            id=nid,
            tag=bn.tag,
            attributes=tuple(bn.attrs),
            direct_text=_collapse("".join(bn.texts)),
            children=child_ids,
            depth=depth,
            parent=parent,
        )
        return nid

    root_id = freeze(root, 0, None)
    return DomTree(root=root_id, nodes=nodes, max_depth=max_depth)


def node_path(tree: DomTree, node_id: int) -> NodePath:
    """Child-index steps from the root to the node (element children only)."""
    node = tree.node(node_id)
    steps: list[int] = []
    while node.parent is not None:
        parent = tree.nodes[node.parent]
        steps.append(parent.children.index(node.id))
        node = parent
    return tuple(reversed(steps))


def resolve_path(tree: DomTree, path: Sequence[int]) -> int:
    """Inverse of node_path; raises PathResolutionError on a bad step."""
    nid = tree.root
    for i, step in enumerate(path):
        children = tree.nodes[nid].children
        if step < 0 or step >= len(children):
            raise PathResolutionError(tuple(path), i)
        nid = children[step]
    return nid


def serialize_node(tree: DomTree, node_id: int) -> str:
    """Opening tag with all attributes, direct text, and the closing tag.

    Void elements omit the closing tag. This string is the unit of text
    search, hover tooltips, and popovers.
    """
    node = tree.node(node_id)
    parts = ["<", node.tag]
    for name, value in node.attributes:
        parts.append(f' {name}="{value}"')
    parts.append(">")
    parts.append(node.direct_text)
    if node.tag not in VOID_ELEMENTS:
        parts.append(f"</{node.tag}>")
    return "".join(parts)
