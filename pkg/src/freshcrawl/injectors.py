"""Social-stream and feed injectors that push fresh URLs into a frontier.

An injector runs on its own thread, turns incoming items into SocialPost
records, matches them against the crawl's standing queries, stores matching
posts, and injects their URLs at the fixed injection priority. Standing
queries can be swapped while the injector runs; the swap takes effect for
the next item delivered.

Matching is token-based and case-insensitive: a post matches a query when
its author is one of the query's users, or it carries one of the query's
hashtags, or the query term's tokens appear consecutively among the post's
text tokens. Whole-token comparison only; "ukraine" does not match
"ukrainian".
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Iterable
from xml.etree import ElementTree

import requests

from .dateparse import UTC, parse_datetime_value
from .frontier import INJECTION_PRIORITY, SOURCE_RSS, SOURCE_SOCIAL
from .urls import normalize_url

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
_HASHTAG_RE = re.compile(r"#(\w+)", re.UNICODE)
_TAG_STRIP_RE = re.compile(r"<[^>]+>")

DEFAULT_MAX_REDIRECT_HOPS = 5


class InjectorError(ValueError):
    pass


@dataclass(frozen=True)
class StreamQuery:
    """A standing filter over a social stream: any field match qualifies."""

    terms: tuple[str, ...] = ()
    hashtags: tuple[str, ...] = ()
    users: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(t.strip() for t in self.terms if t.strip()))
        object.__setattr__(self, "hashtags",
                           tuple(h.strip().lstrip("#") for h in self.hashtags if h.strip().lstrip("#")))
        object.__setattr__(self, "users",
                           tuple(u.strip().lstrip("@") for u in self.users if u.strip().lstrip("@")))
        if not (self.terms or self.hashtags or self.users):
            raise InjectorError("a stream query needs at least one term, hashtag or user")

    @classmethod
    def from_json(cls, data: dict) -> "StreamQuery":
        if not isinstance(data, dict):
            raise InjectorError("stream query must be a JSON object")
        return cls(
            terms=tuple(data.get("terms", ())),
            hashtags=tuple(data.get("hashtags", ())),
            users=tuple(data.get("users", ())),
        )

    def to_json(self) -> dict:
        return {"terms": list(self.terms), "hashtags": list(self.hashtags),
                "users": list(self.users)}


@dataclass(frozen=True)
class SocialPost:
    id: str
    author: str
    created_at: datetime
    text: str
    urls: tuple[str, ...]

    @classmethod
    def from_json(cls, data: dict) -> "SocialPost":
        created = data.get("created_at")
        if isinstance(created, str):
            created_dt = parse_datetime_value(created)
            if created_dt is None:
                raise InjectorError(f"unparseable created_at {created!r}")
        elif isinstance(created, datetime):
            created_dt = created
        else:
            raise InjectorError("post is missing created_at")
        return cls(
            id=str(data["id"]),
            author=str(data.get("author", "")),
            created_at=created_dt,
            text=str(data.get("text", "")),
            urls=tuple(data.get("urls", ())),
        )

    def to_json(self) -> dict:
        return {"id": self.id, "author": self.author,
                "created_at": self.created_at.astimezone(UTC).isoformat(),
                "text": self.text, "urls": list(self.urls)}


def post_hashtags(text: str) -> set[str]:
    return {m.group(1).casefold() for m in _HASHTAG_RE.finditer(text)}


def _tokens(text: str) -> list[str]:
    return [t.casefold() for t in _WORD_RE.findall(text)]


def matches(post: SocialPost, query: StreamQuery) -> bool:
    author = post.author.casefold().lstrip("@")
    if any(author == u.casefold() for u in query.users):
        return True
    tags = post_hashtags(post.text)
    if any(h.casefold() in tags for h in query.hashtags):
        return True
    if query.terms:
        text_tokens = _tokens(post.text)
        for term in query.terms:
            term_tokens = _tokens(term)
            if not term_tokens:
                continue
            width = len(term_tokens)
            for i in range(len(text_tokens) - width + 1):
                if text_tokens[i:i + width] == term_tokens:
                    return True
    return False


# ---- URL resolution ----------------------------------------------------------


@dataclass(frozen=True)
class RedirectResult:
    final_url: str
    chain: tuple[str, ...]
    loop: bool
    resolved: bool


def resolve_redirects(url: str, max_hops: int = DEFAULT_MAX_REDIRECT_HOPS,
                      session: requests.Session | None = None,
                      timeout: float = 10.0) -> RedirectResult:
    """Follow 3xx redirects manually, detecting loops and capping hops.

    On a loop or hop cap the chain is truncated at the last distinct URL.
    Network failures leave the URL unresolved (resolved=False) so callers
    can decide whether to keep the original.
    """
    if session is None:
        session = requests.Session()
    current = normalize_url(url)
    chain = [current]
    seen = {current}
    for _ in range(max_hops):
        try:
            resp = session.head(current, allow_redirects=False, timeout=timeout)
        except requests.RequestException:
            return RedirectResult(current, tuple(chain), False, False)
        location = resp.headers.get("Location")
        if resp.status_code not in (301, 302, 303, 307, 308) or not location:
            return RedirectResult(current, tuple(chain), False, True)
        try:
            nxt = normalize_url(requests.compat.urljoin(current, location))
        except ValueError:
            return RedirectResult(current, tuple(chain), False, False)
        if nxt in seen:
            return RedirectResult(current, tuple(chain), True, True)
        seen.add(nxt)
        chain.append(nxt)
        current = nxt
    return RedirectResult(current, tuple(chain), False, True)


@dataclass(frozen=True)
class PlatformRule:
    """Maps a social platform's permalink shape onto its content API."""

    host_suffix: str
    path_pattern: str
    api_template: str

    def rewrite(self, url: str) -> str | None:
        from urllib.parse import urlsplit
        parts = urlsplit(url)
        host = (parts.hostname or "").lower()
        if host != self.host_suffix and not host.endswith("." + self.host_suffix):
            return None
        m = re.match(self.path_pattern, parts.path)
        if not m:
            return None
        return self.api_template.format(**m.groupdict())


DEFAULT_PLATFORM_RULES: tuple[PlatformRule, ...] = (
    PlatformRule(
        host_suffix="twitter.com",
        path_pattern=r"^/(?P<user>[^/]+)/status(?:es)?/(?P<id>\d+)",
        api_template="https://api.twitter.com/2/tweets/{id}",
    ),
    PlatformRule(
        host_suffix="x.com",
        path_pattern=r"^/(?P<user>[^/]+)/status(?:es)?/(?P<id>\d+)",
        api_template="https://api.twitter.com/2/tweets/{id}",
    ),
)


def rewrite_social_url(url: str, rules: Iterable[PlatformRule] = DEFAULT_PLATFORM_RULES) -> str | None:
    """API endpoint for a platform permalink, or None when no rule applies."""
    for rule in rules:
        rewritten = rule.rewrite(url)
        if rewritten:
            return rewritten
    return None


# ---- injector threads ---------------------------------------------------------

STARTING = "starting"
RUNNING = "running"
STOPPED = "stopped"
FAILED = "failed"

FrontierSink = Callable[[str, float, str], bool]
PostSink = Callable[[SocialPost], bool]


class Injector(threading.Thread):
    """Base class: query matching, sinks, status, atomic query swaps."""

    kind = "base"
    source = SOURCE_SOCIAL

    def __init__(self, queries: list[StreamQuery], frontier_sink: FrontierSink,
                 post_sink: PostSink | None = None,
                 resolve: bool = False, max_redirect_hops: int = DEFAULT_MAX_REDIRECT_HOPS,
                 platform_rules: Iterable[PlatformRule] = DEFAULT_PLATFORM_RULES):
        super().__init__(daemon=True)
        if not queries:
            raise InjectorError(f"{self.kind} injector needs at least one query")
        self._queries = list(queries)
        self._frontier_sink = frontier_sink
        self._post_sink = post_sink
        self._resolve = resolve
        self._max_hops = max_redirect_hops
        self._platform_rules = tuple(platform_rules)
        self._query_lock = threading.Lock()
        self._stop_event = threading.Event()
        self.status = STARTING
        self.diagnostic: str | None = None
        self.injected_count = 0
        self.matched_count = 0

    def queries(self) -> list[StreamQuery]:
        with self._query_lock:
            return list(self._queries)

    def update_queries(self, queries: list[StreamQuery]) -> None:
        if self.status in (STOPPED, FAILED):
            raise InjectorError(f"{self.kind} injector is {self.status}; queries are frozen")
        if not queries:
            raise InjectorError("query update must keep at least one query")
        with self._query_lock:
            self._queries = list(queries)

    def stop(self, join_timeout: float = 10.0) -> None:
        self._stop_event.set()
        if self.is_alive():
            self.join(join_timeout)
        if self.status not in (FAILED,):
            self.status = STOPPED

    def deliver(self, post: SocialPost) -> bool:
        """Match one post against the current queries and act on it."""
        with self._query_lock:
            queries = list(self._queries)
        if not any(matches(post, q) for q in queries):
            return False
        self.matched_count += 1
        if self._post_sink is not None:
            self._post_sink(post)
        for raw_url in post.urls:
            try:
                url = normalize_url(raw_url)
            except ValueError:
                continue
            if self._resolve:
                url = resolve_redirects(url, self._max_hops).final_url
            if self._frontier_sink(url, INJECTION_PRIORITY, self.source):
                self.injected_count += 1
            api_url = rewrite_social_url(url, self._platform_rules)
            if api_url and self._frontier_sink(api_url, INJECTION_PRIORITY, self.source):
                self.injected_count += 1
        return True

    def run(self):
        self.status = RUNNING
        try:
            self._run_stream()
        except Exception as exc:  # injector failure must not kill the crawl
            self.status = FAILED
            self.diagnostic = f"{type(exc).__name__}: {exc}"
        else:
            if self.status != FAILED:
                self.status = STOPPED

    def _run_stream(self):
        raise NotImplementedError


class ReplayInjector(Injector):
    """Replays a recorded NDJSON stream, preserving inter-post spacing.

    The file holds one post per line, sorted by created_at. A speed factor
    of 2 halves every gap; infinity replays without sleeping. Identical
    input produces identical matching and injection decisions at any speed.
    """

    kind = "replay"
    source = SOURCE_SOCIAL

    def __init__(self, path: str, queries, frontier_sink, post_sink=None,
                 speed: float = float("inf"), **kwargs):
        super().__init__(queries, frontier_sink, post_sink, **kwargs)
        if speed <= 0:
            raise InjectorError("replay speed must be positive")
        self.path = path
        self.speed = speed

    def _read_posts(self) -> list[SocialPost]:
        posts: list[SocialPost] = []
        with open(self.path, encoding="utf-8") as fp:
            for line_no, line in enumerate(fp, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    posts.append(SocialPost.from_json(json.loads(line)))
                except (ValueError, KeyError) as exc:
                    raise InjectorError(f"{self.path}:{line_no}: bad post record: {exc}")
        return posts

    def _run_stream(self):
        posts = self._read_posts()
        previous: datetime | None = None
        for post in posts:
            if self._stop_event.is_set():
                return
            if previous is not None and self.speed != float("inf"):
                gap = (post.created_at - previous).total_seconds() / self.speed
                if gap > 0 and self._stop_event.wait(gap):
                    return
            previous = post.created_at
            self.deliver(post)


class RssInjector(Injector):
    """Polls RSS/Atom feeds and treats new items as posts.

    Item identity is the guid (or link) so repeated polls do not re-deliver.
    When constructed without meaningful queries use a match-all query at the
    call site; feeds are usually pre-filtered by choice of feed URL.
    """

    kind = "rss"
    source = SOURCE_RSS

    def __init__(self, feed_urls: list[str], queries, frontier_sink, post_sink=None,
                 poll_interval_s: float = 30.0, max_polls: int | None = None,
                 session: requests.Session | None = None, **kwargs):
        super().__init__(queries, frontier_sink, post_sink, **kwargs)
        if not feed_urls:
            raise InjectorError("rss injector needs at least one feed URL")
        self.feed_urls = [normalize_url(u) for u in feed_urls]
        self.poll_interval_s = poll_interval_s
        self.max_polls = max_polls
        self._session = session or requests.Session()
        self._seen_ids: set[str] = set()

    @staticmethod
    def _text(el) -> str:
        return (el.text or "").strip() if el is not None else ""

    def _items_from_feed(self, xml_text: str):
        try:
            root = ElementTree.fromstring(xml_text)
        except ElementTree.ParseError:
            return
        ns = {"atom": "http://www.w3.org/2005/Atom"}
        for item in root.iter("item"):  # RSS 2.0
            link = self._text(item.find("link"))
            guid = self._text(item.find("guid")) or link
            title = self._text(item.find("title"))
            desc = _TAG_STRIP_RE.sub(" ", self._text(item.find("description")))
            when = parse_datetime_value(self._text(item.find("pubDate"))) \
                or datetime.now(timezone.utc)
            author = self._text(item.find("author"))
            if guid:
                yield SocialPost(id=guid, author=author, created_at=when,
                                 text=f"{title} {desc}".strip(),
                                 urls=(link,) if link else ())
        for entry in root.iter("{http://www.w3.org/2005/Atom}entry"):
            link_el = entry.find("atom:link", ns)
            link = link_el.get("href") if link_el is not None else ""
            guid = self._text(entry.find("atom:id", ns)) or link
            title = self._text(entry.find("atom:title", ns))
            summary = _TAG_STRIP_RE.sub(" ", self._text(entry.find("atom:summary", ns)))
            when = parse_datetime_value(self._text(entry.find("atom:updated", ns))) \
                or datetime.now(timezone.utc)
            author = self._text(entry.find("atom:author/atom:name", ns))
            if guid:
                yield SocialPost(id=guid, author=author, created_at=when,
                                 text=f"{title} {summary}".strip(),
                                 urls=(link,) if link else ())

    def poll_once(self) -> int:
        delivered = 0
        for feed_url in self.feed_urls:
            try:
                resp = self._session.get(feed_url, timeout=15.0)
                resp.raise_for_status()
            except requests.RequestException:
                continue
            for post in self._items_from_feed(resp.text):
                if post.id in self._seen_ids:
                    continue
                self._seen_ids.add(post.id)
                if self.deliver(post):
                    delivered += 1
        return delivered

    def _run_stream(self):
        polls = 0
        while not self._stop_event.is_set():
            self.poll_once()
            polls += 1
            if self.max_polls is not None and polls >= self.max_polls:
                return
            if self._stop_event.wait(self.poll_interval_s):
                return


class LiveSocialInjector(Injector):
    """Adapter seam for a live platform stream.

    The adapter owns authentication (credentials come from environment
    variables, never from config files) and yields SocialPost objects; this
    class only applies the shared matching/injection pipeline to them.
    """

    kind = "live_social"
    source = SOURCE_SOCIAL

    def __init__(self, adapter, queries, frontier_sink, post_sink=None, **kwargs):
        super().__init__(queries, frontier_sink, post_sink, **kwargs)
        if adapter is None or not hasattr(adapter, "stream"):
            raise InjectorError("live_social needs an adapter with a stream(queries) method")
        self._adapter = adapter

    def _run_stream(self):
        for post in self._adapter.stream(self.queries()):
            if self._stop_event.is_set():
                return
            self.deliver(post)
