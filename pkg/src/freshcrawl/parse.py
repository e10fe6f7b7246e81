"""Turning fetched bytes into structured documents.

HTML is parsed leniently into a small element tree; the parser never raises
on malformed markup. JSON payloads (from API-style fetches) are not
vectorized: their text stays empty and any http(s) URLs found in the
payload become outlinks.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING
from urllib.parse import urljoin

from .htmltree import Element, parse_html
from .language import detect_language
from .urls import is_http_url, normalize_url

if TYPE_CHECKING:
    from .fetch import FetchedPage

_CHARSET_RE = re.compile(rb"""charset\s*=\s*["']?\s*([A-Za-z0-9_.:-]+)""")
_URL_IN_TEXT_RE = re.compile(r"https?://[^\s\"'<>\\]+")

# meta keys whose content commonly holds a publication or modification date
_DATE_META_KEYS = {
    "date", "dc.date", "dc.date.issued", "dcterms.date", "dcterms.created",
    "article:published_time", "og:article:published_time",
    "article:modified_time", "og:updated_time", "publish-date", "publishdate",
    "pubdate", "publication_date", "datepublished", "datecreated",
    "sailthru.date", "parsely-pub-date", "timestamp", "last-modified",
}


@dataclass
class ParsedDocument:
    url: str
    base_url: str
    title: str
    main_text: str
    outlinks: list[str]
    language: str
    language_confidence: float
    meta_dates: list[tuple[str, str]] = field(default_factory=list)
    time_elements: list[tuple[str | None, str]] = field(default_factory=list)
    element_tree: Element | None = None
    decode_errors: bool = False
    is_html: bool = True


def _decode(body: bytes, content_type: str) -> tuple[str, bool]:
    charset = None
    m = _CHARSET_RE.search(content_type.encode("ascii", "ignore"))
    if m:
        charset = m.group(1).decode()
    if charset is None:
        m = _CHARSET_RE.search(body[:2048])
        if m:
            charset = m.group(1).decode()
    for candidate in (charset, "utf-8"):
        if not candidate:
            continue
        try:
            return body.decode(candidate), False
        except (UnicodeDecodeError, LookupError):
            continue
    return body.decode("utf-8", errors="replace"), True


def _collect_meta_dates(root: Element, headers: dict[str, str]) -> list[tuple[str, str]]:
    found: list[tuple[str, str]] = []
    for meta in root.find_all("meta"):
        key = (meta.get("name") or meta.get("property")
               or meta.get("itemprop") or meta.get("http-equiv") or "").lower()
        content = meta.get("content")
        if key in _DATE_META_KEYS and content:
            found.append((key, content))
    for name, value in headers.items():
        if name.lower() == "last-modified" and value:
            found.append(("last-modified", value))
    return found


def _parse_json_payload(page: "FetchedPage", text: str) -> ParsedDocument:
    outlinks: list[str] = []
    seen: set[str] = set()
    try:
        json.loads(text)
    except ValueError:
        pass  # still harvest URLs from malformed payloads
    for m in _URL_IN_TEXT_RE.finditer(text):
        try:
            u = normalize_url(m.group(0))
        except ValueError:
            continue
        if u not in seen:
            seen.add(u)
            outlinks.append(u)
    return ParsedDocument(
        url=page.url, base_url=page.final_url, title="", main_text="",
        outlinks=outlinks, language="und", language_confidence=0.0,
        is_html=False,
    )


def parse(page: "FetchedPage") -> ParsedDocument:
    """Parse a fetched page; total for any bytes, HTML or not."""
    text, had_errors = _decode(page.body, page.content_type)
    content_type = page.content_type.lower()
    if "json" in content_type:
        doc = _parse_json_payload(page, text)
        doc.decode_errors = had_errors
        return doc

    root = parse_html(text)
    base_url = page.final_url
    base_el = root.find("base")
    if base_el is not None and base_el.get("href"):
        base_url = urljoin(page.final_url, base_el.get("href"))

    title_el = root.find("title")
    title = title_el.text() if title_el is not None else ""

    body_el = root.find("body") or root
    main_text = body_el.text()

    outlinks: list[str] = []
    seen: set[str] = set()
    for a in root.find_all("a"):
        href = a.get("href")
        if not href:
            continue
        absolute = urljoin(base_url, href.strip())
        if not is_http_url(absolute):
            continue
        try:
            u = normalize_url(absolute)
        except ValueError:
            continue
        if u not in seen:
            seen.add(u)
            outlinks.append(u)

    time_elements = [
        (t.get("datetime"), t.text()) for t in root.find_all("time")
    ]
    language, confidence = detect_language(main_text)
    return ParsedDocument(
        url=page.url,
        base_url=base_url,
        title=title,
        main_text=main_text,
        outlinks=outlinks,
        language=language,
        language_confidence=confidence,
        meta_dates=_collect_meta_dates(root, page.headers),
        time_elements=time_elements,
        element_tree=root,
        decode_errors=had_errors,
    )
