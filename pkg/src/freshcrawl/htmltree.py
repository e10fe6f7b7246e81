"""Small lenient HTML tree built on html.parser.

Only what the crawler needs: a navigable element tree with parents, text
extraction that skips script-like content, and tolerance for the malformed
markup real pages ship (unclosed tags, stray end tags, missing html/body).
"""

from __future__ import annotations

from html.parser import HTMLParser

VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "param", "source", "track", "wbr",
}

# starting one of these implicitly closes a same-kind open element
_SIBLING_CLOSERS = {
    "p": ("p",),
    "li": ("li",),
    "td": ("td", "th"),
    "th": ("td", "th"),
    "tr": ("tr",),
    "option": ("option",),
    "dt": ("dt", "dd"),
    "dd": ("dt", "dd"),
}

_SKIP_TEXT_TAGS = {"script", "style", "noscript", "template"}


class Element:
    __slots__ = ("tag", "attrs", "children", "parent")

    def __init__(self, tag: str, attrs: dict[str, str] | None = None, parent: "Element | None" = None):
        self.tag = tag
        self.attrs = attrs or {}
        self.children: list[Element | str] = []
        self.parent = parent

    def get(self, name: str, default: str | None = None) -> str | None:
        return self.attrs.get(name, default)

    def iter(self):
        """All elements in document order, self included."""
        yield self
        for child in self.children:
            if isinstance(child, Element):
                yield from child.iter()

    def itertext(self):
        if self.tag in _SKIP_TEXT_TAGS:
            return
        for child in self.children:
            if isinstance(child, Element):
                yield from child.itertext()
            else:
                yield child

    def text(self) -> str:
        """Concatenated descendant text, whitespace-normalized."""
        return " ".join("".join(self.itertext()).split())

    def find_all(self, tag: str) -> list["Element"]:
        return [el for el in self.iter() if el.tag == tag]

    def find(self, tag: str) -> "Element | None":
        for el in self.iter():
            if el.tag == tag:
                return el
        return None

    def ancestors(self):
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def __repr__(self) -> str:
        return f"<Element {self.tag} attrs={self.attrs!r} children={len(self.children)}>"


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Element("#document")
        self.stack = [self.root]

    def _open(self, tag: str, attrs, push: bool):
        closers = _SIBLING_CLOSERS.get(tag)
        if closers and self.stack[-1].tag in closers:
            self.stack.pop()
        attr_map: dict[str, str] = {}
        for name, value in attrs:
            if name not in attr_map:
                attr_map[name] = value if value is not None else ""
        el = Element(tag, attr_map, self.stack[-1])
        self.stack[-1].children.append(el)
        if push and tag not in VOID_TAGS:
            self.stack.append(el)

    def handle_starttag(self, tag, attrs):
        self._open(tag, attrs, push=True)

    def handle_startendtag(self, tag, attrs):
        self._open(tag, attrs, push=False)

    def handle_endtag(self, tag):
        # close the nearest matching open element; ignore strays
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if data:
            self.stack[-1].children.append(data)


def parse_html(text: str) -> Element:
    """Parse markup into an element tree; never raises on bad HTML."""
    builder = _TreeBuilder()
    try:
        builder.feed(text)
        builder.close()
    except Exception:
        # html.parser is robust in practice; keep whatever tree we built
        pass
    return builder.root
