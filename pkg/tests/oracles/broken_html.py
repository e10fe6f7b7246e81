"""Flat-parser link extraction for the malformed-HTML fixture.

The extractor below is a stateless stdlib HTMLParser subclass: no tree, no
recovery logic, just every href attribute in document order. Fixture URLs
avoid dot segments and default ports on purpose, so joining against the
base plus a fragment strip and scheme/host lowercasing is a complete
normalization for them; the package's richer normalizer must agree.
"""

from __future__ import annotations

import json
from html.parser import HTMLParser
from urllib.parse import urljoin, urlsplit, urlunsplit

BASE_URL = "http://fix.example/dir/page.html"

BROKEN_HTML = """<html><head><title>Broken fixture</title>
<body>
<p>Opening paragraph text with an unclosed emphasis <em>running on
<a href="a.html">relative link</a> and more prose after it
<div><p>second block <b>bold run over <a href='/abs/path.html'>absolute path</a>
<p>third paragraph <a href="HTTP://Fix.Example/dir/page.html#section">self link</a>
<ul><li>item one <a href=dup.html>dup</a><li>item two <a href="dup.html">dup again</a>
<li>mail us <a href="mailto:desk@fix.example">by mail</a>
</div>
<p>trailing text after a stray </table> end tag, still readable
<a href="../up/one.html">goes up</a>
"""


class _FlatLinkCollector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.hrefs: list[str] = []
        self.text_parts: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            for name, value in attrs:
                if name == "href" and value:
                    self.hrefs.append(value)
                    break

    handle_startendtag = handle_starttag

    def handle_data(self, data):
        if data.strip():
            self.text_parts.append(data.strip())


def _naive_normalize(url: str) -> str | None:
    parts = urlsplit(url)
    if parts.scheme not in ("http", "https") or not parts.netloc:
        return None
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(),
                       parts.path or "/", parts.query, ""))


def raw_hrefs() -> list[str]:
    collector = _FlatLinkCollector()
    collector.feed(BROKEN_HTML)
    return collector.hrefs


def expected_links() -> list[str]:
    collector = _FlatLinkCollector()
    collector.feed(BROKEN_HTML)
    out: list[str] = []
    for href in collector.hrefs:
        normalized = _naive_normalize(urljoin(BASE_URL, href.strip()))
        if normalized is not None and normalized not in out:
            out.append(normalized)
    return out


def expected_text_fragments() -> list[str]:
    collector = _FlatLinkCollector()
    collector.feed(BROKEN_HTML)
    return collector.text_parts


def main() -> None:
    print("EXPECTED_LINKS =", json.dumps(expected_links(), indent=2))
    fragments = expected_text_fragments()
    print("text fragments:", len(fragments))
    for frag in fragments:
        print("   ", json.dumps(frag))


if __name__ == "__main__":
    main()
