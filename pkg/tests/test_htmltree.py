from freshcrawl.htmltree import parse_html

from oracles import broken_html as bh


class TestParseHtml:
    def test_simple_tree(self):
        root = parse_html("<html><body><p>Hello <b>world</b></p></body></html>")
        p = root.find("p")
        assert p is not None
        assert p.text() == "Hello world"

    def test_text_normalizes_whitespace(self):
        root = parse_html("<p>  a\n\t b   c </p>")
        assert root.text() == "a b c"

    def test_script_and_style_excluded(self):
        root = parse_html(
            "<body><script>var x = 1;</script><style>p{}</style><p>kept</p></body>")
        assert root.text() == "kept"

    def test_unclosed_siblings_close_each_other(self):
        root = parse_html("<ul><li>one<li>two<li>three</ul>")
        items = root.find_all("li")
        assert [li.text() for li in items] == ["one", "two", "three"]
        # none of them nests inside a sibling
        assert all(li.parent.tag == "ul" for li in items)

    def test_unclosed_paragraphs(self):
        root = parse_html("<p>first<p>second")
        paras = root.find_all("p")
        assert [p.text() for p in paras] == ["first", "second"]

    def test_attrs_preserved(self):
        root = parse_html('<a href="/x" CLASS="big">go</a>')
        a = root.find("a")
        assert a.attrs["href"] == "/x"
        assert a.attrs["class"] == "big"

    def test_never_raises_on_garbage(self):
        for junk in ["<<<>>>", "<a <b> </<>", "\x00\x01", "</only-closers>", ""]:
            root = parse_html(junk)
            assert root.tag == "#document"

    def test_ancestors_walk_upwards(self):
        root = parse_html("<div><p><a>x</a></p></div>")
        a = root.find("a")
        tags = [el.tag for el in a.ancestors()]
        assert tags[:2] == ["p", "div"]

    def test_find_all_document_order(self):
        root = parse_html("<div><a>1</a><p><a>2</a></p><a>3</a></div>")
        assert [a.text() for a in root.find_all("a")] == ["1", "2", "3"]


class TestAgainstFlatParse:
    """The tree parser must agree with a flat stdlib scan on links and text."""

    def test_broken_page_links_survive(self):
        root = parse_html(bh.BROKEN_HTML)
        hrefs = [a.attrs.get("href") for a in root.find_all("a")]
        assert hrefs == bh.raw_hrefs()

    def test_broken_page_text_fragments_survive(self):
        text = parse_html(bh.BROKEN_HTML).text()
        for fragment in bh.expected_text_fragments():
            assert fragment in text
