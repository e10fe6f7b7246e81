"""Deterministic synthetic crawl worlds served over loopback HTTP.

Two pieces live here. FixtureServer is a small threaded HTTP server that
dispatches on the Host header, so one listener on 0.0.0.0 can impersonate
many hosts via 127.0.0.0/8 addresses (127.0.0.2, 127.0.0.3, ... all reach
the loopback interface without configuration). build_world() generates a
linked page universe on top of it with known topical structure, known
creation dates embedded through rotating date features, and a social post
stream that references a fresh page cluster unreachable from the seed side.

The world is sized so the four crawl configurations behave differently on
it: a focused crawl drains the topical core and stops at the off-topic
ring, an unfocused crawl wanders into the stale bulk behind the ring, and
injected runs reach the fresh cluster that only the post stream links to.
"""

from __future__ import annotations

import json
import random
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

UTC = timezone.utc

# ---- generic fixture server ---------------------------------------------------


@dataclass
class Route:
    body: bytes = b""
    status: int = 200
    content_type: str = "text/html; charset=utf-8"
    headers: dict[str, str] = field(default_factory=dict)
    delay_s: float = 0.0


class FixtureServer:
    """Threaded loopback HTTP server with Host-header routing and a request log.

    Routes are keyed by (hostname, path); a route registered under the empty
    hostname matches any Host. Paths are matched exactly first, then without
    their query string. Unknown paths get a 404, which robots.txt probes
    rely on (a missing robots file means everything is allowed).
    """

    def __init__(self):
        self._routes: dict[tuple[str, str], Route] = {}
        self._log: list[tuple[float, str, str, str]] = []
        self._log_lock = threading.Lock()
        routes = self._routes
        log = self._log
        log_lock = self._log_lock

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args):
                pass

            def _route(self) -> Route | None:
                hostname = (self.headers.get("Host") or "").split(":")[0].lower()
                path = self.path
                with log_lock:
                    log.append((time.monotonic(), hostname, path, self.command))
                for key in ((hostname, path), ("", path)):
                    if key in routes:
                        return routes[key]
                if "?" in path:
                    bare = path.split("?", 1)[0]
                    for key in ((hostname, bare), ("", bare)):
                        if key in routes:
                            return routes[key]
                return None

            def _respond(self, send_body: bool):
                route = self._route()
                if route is None:
                    self.send_error(404, "not found")
                    return
                if route.delay_s > 0:
                    time.sleep(route.delay_s)
                self.send_response(route.status)
                self.send_header("Content-Type", route.content_type)
                self.send_header("Content-Length", str(len(route.body)))
                for name, value in route.headers.items():
                    self.send_header(name, value)
                self.end_headers()
                if send_body and route.body:
                    self.wfile.write(route.body)

            def do_GET(self):
                self._respond(True)

            def do_HEAD(self):
                self._respond(False)

        self._server = ThreadingHTTPServer(("0.0.0.0", 0), Handler)
        self._server.daemon_threads = True
        self.port: int = self._server.server_address[1]
        self._thread: threading.Thread | None = None

    def start(self) -> "FixtureServer":
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True, name="fixture-http")
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def url(self, host: str, path: str) -> str:
        return f"http://{host}:{self.port}{path}"

    def add(self, host: str, path: str, body: bytes | str, *,
            status: int = 200, content_type: str = "text/html; charset=utf-8",
            headers: dict[str, str] | None = None, delay_s: float = 0.0) -> str:
        if isinstance(body, str):
            body = body.encode("utf-8")
        self._routes[(host.lower(), path)] = Route(
            body=body, status=status, content_type=content_type,
            headers=dict(headers or {}), delay_s=delay_s,
        )
        return self.url(host, path)

    def add_redirect(self, host: str, path: str, location: str, status: int = 302) -> str:
        self._routes[(host.lower(), path)] = Route(
            body=b"", status=status, content_type="text/plain",
            headers={"Location": location},
        )
        return self.url(host, path)

    def requests_seen(self) -> list[tuple[float, str, str, str]]:
        with self._log_lock:
            return list(self._log)

    def clear_log(self) -> None:
        with self._log_lock:
            self._log.clear()


# ---- vocabulary ----------------------------------------------------------------

# Core topical vocabulary; the reference vector is built from pages written
# in it, so any page sharing these words scores against the crawl topic.
TOPIC_WORDS = (
    "outbreak epidemic virus vaccine clinic health quarantine infection "
    "hospital treatment doctor nurse patient symptom fever testing "
    "containment response emergency relief agency surveillance immunization ward"
).split()

# Shared non-topical vocabulary: appears in seeds and topical pages but
# never in the off-topic ring, so ring relevance stays at zero.
NEUTRAL_WORDS = (
    "report region city district account summary detail statement community "
    "official resident school market street weather council budget meeting "
    "program plan service supply road bridge harbor valley north south coast field"
).split()

FRESH_WORDS = "briefing alert bulletin advisory screening booster cluster".split()

# Strictly disjoint from everything the reference vector can contain.
OFF_WORDS = (
    "football stadium striker referee tournament goalkeeper recipe flour "
    "butter oven skillet sauce gallery sculpture violin orchestra chess "
    "puzzle garden orchid kayak summit trail cinema ballad drummer festival painting"
).split()

# Function words for texture; all of these are stopwords, so they never
# reach a term vector and are safe to use in every page group.
GLUE_WORDS = "the a of and to in on for with is are was from this that at as by".split()

_MONTH_NAMES = (
    "January February March April May June July August September October "
    "November December"
).split()

_RU_SENTENCES = [
    "Городская больница сообщила о новых случаях заболевания в районе.",
    "Врачи продолжают наблюдение за пациентами и проводят вакцинацию населения.",
    "Местные власти открыли дополнительные пункты тестирования жителей.",
    "Эпидемиологи изучают распространение вируса в соседних областях.",
    "Карантинные меры остаются в силе до конца следующего месяца.",
    "Министерство здравоохранения опубликовало новые рекомендации для клиник.",
]


# ---- world description ----------------------------------------------------------

DATE_FEATURES = ("url", "time", "meta", "trigger", "content")

SEED_HOST = "127.0.0.2"
MID_HOSTS = ("127.0.0.2", "127.0.0.3", "127.0.0.4", "127.0.0.5")
RING_HOST = "127.0.0.6"
DEEP_HOSTS = ("127.0.0.6", "127.0.0.7")
FRESH_HOSTS = ("127.0.0.8", "127.0.0.9")
FOREIGN_HOST = "127.0.0.4"


@dataclass(frozen=True)
class WorldSizes:
    seeds: int = 3
    mid: int = 120        # topical core, ages 10-60 days
    ring: int = 60        # off-topic ring linked from the core, 70-90 days
    deep: int = 150       # stale bulk behind the ring, 70-90 days
    fresh: int = 170      # fresh topical cluster, only reachable via posts
    foreign: int = 6      # non-English pages linked from the core


@dataclass
class _PageDraft:
    url: str
    host: str
    path: str
    group: str
    title: str
    created: datetime | None
    feature: str | None
    body_parts: list[str] = field(default_factory=list)
    head_parts: list[str] = field(default_factory=list)


@dataclass
class SyntheticWorld:
    """A built world: page groups, intended dates, posts and the crawl spec."""

    now: datetime
    port: int
    spec: dict
    groups: dict[str, list[str]]
    created: dict[str, datetime | None]
    feature: dict[str, str | None]
    posts: list[dict]
    posted_urls: list[str]
    redirect_aliases: dict[str, str]
    replay_path: str | None = None

    @property
    def seed_urls(self) -> list[str]:
        return list(self.groups["seed"])

    @property
    def fresh_urls(self) -> list[str]:
        return list(self.groups["fresh"])

    def all_urls(self) -> list[str]:
        out: list[str] = []
        for urls in self.groups.values():
            out.extend(urls)
        return out

    def write_replay(self, path: str) -> str:
        with open(path, "w", encoding="utf-8") as fp:
            for post in sorted(self.posts, key=lambda p: p["created_at"]):
                fp.write(json.dumps(post, sort_keys=True) + "\n")
        self.replay_path = path
        return path


# ---- text generation -------------------------------------------------------------


def _sentence(rng: random.Random, bags: list[tuple[list[str], float]], n_words: int) -> str:
    weights = [w for _, w in bags]
    words = []
    for _ in range(n_words):
        bag = rng.choices([b for b, _ in bags], weights=weights)[0]
        words.append(rng.choice(bag))
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def _paragraph(rng: random.Random, bags: list[tuple[list[str], float]],
               n_tokens: int, links: list[tuple[str, str]] | None = None) -> str:
    """One <p> block of roughly n_tokens words with links woven between sentences."""
    sentences: list[str] = []
    total = 0
    while total < n_tokens:
        n = rng.randint(8, 14)
        sentences.append(_sentence(rng, bags, n))
        total += n
    parts = list(sentences)
    if links:
        at = 1 if len(parts) > 1 else 0
        for href, anchor in links:
            parts.insert(at, f'<a href="{href}">{anchor}</a>')
            at = min(at + 2, len(parts))
    return "<p>" + " ".join(parts) + "</p>"


def _short_block(links: list[tuple[str, str]], label: str) -> str:
    """A nav-style div kept under the paragraph token floor."""
    items = " ".join(f'<a href="{href}">{anchor}</a>' for href, anchor in links)
    return f'<div class="after">{label} {items}</div>'


def _title(rng: random.Random, bag: list[str], extra: str = "") -> str:
    words = rng.sample(bag, 2)
    if extra:
        words.append(extra)
    return " ".join(words)


def _date_line(feature: str, when: datetime) -> str:
    stamp = f"{_MONTH_NAMES[when.month - 1]} {when.day}, {when.year}"
    if feature == "trigger":
        return f"<p>Published on {stamp}.</p>"
    if feature == "content":
        return f"<p>Field notes from {stamp} cover the district assessments.</p>"
    if feature == "time":
        iso = when.astimezone(UTC).isoformat()
        return f'<p>Filed <time datetime="{iso}">earlier this week</time> by the desk.</p>'
    return ""


def _render(draft: _PageDraft) -> str:
    head = "".join(draft.head_parts)
    body = "\n".join(draft.body_parts)
    return (
        "<!doctype html>\n"
        f"<html><head><title>{draft.title}</title>{head}</head>\n"
        f"<body>\n<h1>{draft.title}</h1>\n{body}\n</body></html>\n"
    )


# ---- world builder ---------------------------------------------------------------


def _midnight(dt: datetime) -> datetime:
    return datetime(dt.year, dt.month, dt.day, tzinfo=UTC)


def _second(dt: datetime) -> datetime:
    # embedded date strings carry second resolution at most
    return dt.replace(microsecond=0)


def _assign_date(draft: _PageDraft, rng: random.Random) -> None:
    """Embed the draft's creation date through its assigned feature."""
    feature = draft.feature
    when = draft.created
    if feature is None or when is None:
        return
    if feature in ("url", "trigger", "content"):
        # these features carry day resolution; pin the intended instant to it
        when = _midnight(when)
        draft.created = when
    if feature == "url":
        return  # the path itself carries the date; set at draft time
    if feature == "meta":
        iso = when.astimezone(UTC).isoformat()
        draft.head_parts.append(f'<meta name="date" content="{iso}">')
        return
    draft.body_parts.append(_date_line(feature, when))


def build_world(server: FixtureServer, seed: int = 20250819,
                now: datetime | None = None,
                sizes: WorldSizes = WorldSizes()) -> SyntheticWorld:
    rng = random.Random(seed)
    now = now or datetime.now(UTC)
    port = server.port

    topical = [(TOPIC_WORDS, 0.5), (NEUTRAL_WORDS, 0.3), (GLUE_WORDS, 0.2)]
    seedish = [(TOPIC_WORDS, 0.65), (NEUTRAL_WORDS, 0.2), (GLUE_WORDS, 0.15)]
    # fresh pages follow the seed mix so they cosine close to the reference
    freshish = [(TOPIC_WORDS, 0.62), (NEUTRAL_WORDS, 0.22),
                (FRESH_WORDS, 0.04), (GLUE_WORDS, 0.12)]
    offish = [(OFF_WORDS, 0.75), (GLUE_WORDS, 0.25)]

    drafts: dict[str, _PageDraft] = {}
    groups: dict[str, list[str]] = {g: [] for g in
                                    ("seed", "mid", "ring", "deep", "fresh", "foreign")}

    def new_draft(group: str, host: str, path: str, title: str,
                  created: datetime | None, feature: str | None) -> _PageDraft:
        url = f"http://{host}:{port}{path}"
        draft = _PageDraft(url=url, host=host, path=path, group=group,
                           title=title, created=created, feature=feature)
        drafts[url] = draft
        groups[group].append(url)
        return draft

    def dated_path(prefix: str, slug: str, feature: str, created: datetime) -> str:
        if feature == "url":
            return f"/{prefix}/{created:%Y/%m/%d}/{slug}"
        return f"/{prefix}/{slug}"

    # -- seeds: a week old, anchored via <time> so sub-day resolution survives
    for i in range(sizes.seeds):
        created = _second(now - timedelta(days=7, hours=rng.uniform(0, 12)))
        slug = f"desk-{rng.choice(NEUTRAL_WORDS)}-{i}"
        new_draft("seed", SEED_HOST, f"/desk/{slug}",
                  _title(rng, TOPIC_WORDS, "desk"), created, "time")

    # -- topical core
    for i in range(sizes.mid):
        created = _second(now - timedelta(days=rng.uniform(10, 60),
                                          hours=rng.uniform(0, 20)))
        feature = DATE_FEATURES[i % len(DATE_FEATURES)]
        if feature in ("url", "trigger", "content"):
            created = _midnight(created)
        slug = f"{rng.choice(TOPIC_WORDS)}-{rng.choice(NEUTRAL_WORDS)}-{i}"
        host = MID_HOSTS[i % len(MID_HOSTS)]
        new_draft("mid", host, dated_path("news", slug, feature, created),
                  _title(rng, TOPIC_WORDS), created, feature)

    # -- off-topic ring
    for i in range(sizes.ring):
        created = _second(now - timedelta(days=rng.uniform(70, 90),
                                          hours=rng.uniform(0, 20)))
        feature = DATE_FEATURES[i % len(DATE_FEATURES)]
        if feature in ("url", "trigger", "content"):
            created = _midnight(created)
        slug = f"{rng.choice(OFF_WORDS)}-{rng.choice(OFF_WORDS)}-{i}"
        new_draft("ring", RING_HOST, dated_path("extra", slug, feature, created),
                  _title(rng, OFF_WORDS), created, feature)

    # -- stale bulk behind the ring; some pages deliberately undated
    for i in range(sizes.deep):
        feature: str | None = DATE_FEATURES[i % len(DATE_FEATURES)]
        created: datetime | None = _second(now - timedelta(
            days=rng.uniform(70, 90), hours=rng.uniform(0, 20)))
        if i % 10 == 7:
            feature, created = None, None
        elif feature in ("url", "trigger", "content"):
            created = _midnight(created)
        slug = f"{rng.choice(OFF_WORDS)}-{rng.choice(OFF_WORDS)}-{i}"
        host = DEEP_HOSTS[i % len(DEEP_HOSTS)]
        path = dated_path("archive", slug, feature or "plain", created or now)
        new_draft("deep", host, path, _title(rng, OFF_WORDS), created, feature)

    # -- fresh topical cluster, hours old, never linked from the core
    for i in range(sizes.fresh):
        created = _second(now - timedelta(hours=rng.uniform(2, 70)))
        feature = DATE_FEATURES[i % len(DATE_FEATURES)]
        if feature in ("url", "trigger", "content"):
            created = _midnight(created)
        slug = f"{rng.choice(TOPIC_WORDS)}-{rng.choice(FRESH_WORDS)}-{i}"
        host = FRESH_HOSTS[i % len(FRESH_HOSTS)]
        new_draft("fresh", host, dated_path("wire", slug, feature, created),
                  _title(rng, TOPIC_WORDS, "wire"), created, feature)

    # -- foreign-language pages inside the core's link neighborhood
    for i in range(sizes.foreign):
        created = _second(now - timedelta(days=rng.uniform(25, 35)))
        new_draft("foreign", FOREIGN_HOST, f"/ru/svodka-{i}",
                  "Сводка по региону", created, "meta")

    seed_urls = groups["seed"]
    mid_urls = groups["mid"]
    ring_urls = groups["ring"]
    deep_urls = groups["deep"]
    fresh_urls = groups["fresh"]
    foreign_urls = groups["foreign"]

    def anchor_for(url: str) -> str:
        return drafts[url].title

    # -- seed bodies: long topical paragraphs carrying links to the whole core
    for s, url in enumerate(seed_urls):
        draft = drafts[url]
        draft.body_parts.append(_paragraph(rng, seedish, 60))
        share = [mid_urls[k] for k in range(len(mid_urls))
                 if k % max(len(seed_urls), 1) == s]
        for start in range(0, len(share), 10):
            chunk = [(u, anchor_for(u)) for u in share[start:start + 10]]
            draft.body_parts.append(_paragraph(rng, seedish, 60, links=chunk))
        draft.body_parts.append(_paragraph(rng, seedish, 55))
        _assign_date(draft, rng)

    # -- core bodies: topical text, a few peer links, short off-topic nav
    for i, url in enumerate(mid_urls):
        draft = drafts[url]
        draft.body_parts.append(_paragraph(rng, topical, 65))
        peers = []
        if len(mid_urls) > 1:
            for step in (7, 31):
                peer = mid_urls[(i * step + 3) % len(mid_urls)]
                if peer != url and peer not in peers:
                    peers.append(peer)
        draft.body_parts.append(_paragraph(
            rng, topical, 60, links=[(u, anchor_for(u)) for u in peers]))
        _assign_date(draft, rng)
        draft.body_parts.append(_paragraph(rng, topical, 55))
        nav: list[tuple[str, str]] = []
        if ring_urls:
            nav.append((ring_urls[i % len(ring_urls)],
                        anchor_for(ring_urls[i % len(ring_urls)])))
            if i % 3 == 0:
                other = ring_urls[(i * 5 + 2) % len(ring_urls)]
                if (other, anchor_for(other)) not in nav:
                    nav.append((other, anchor_for(other)))
        if foreign_urls and i % max(len(mid_urls) // max(len(foreign_urls), 1), 1) == 0:
            ru = foreign_urls[(i // max(len(mid_urls) // max(len(foreign_urls), 1), 1))
                              % len(foreign_urls)]
            nav.append((ru, "сводка"))
        if nav:
            draft.body_parts.append(_short_block(nav, "elsewhere:"))

    # -- ring bodies: off-topic prose plus short link rows into the bulk
    for i, url in enumerate(ring_urls):
        draft = drafts[url]
        draft.body_parts.append(_paragraph(rng, offish, 60))
        _assign_date(draft, rng)
        draft.body_parts.append(_paragraph(rng, offish, 55))
        mine = [deep_urls[k] for k in range(len(deep_urls))
                if k % max(len(ring_urls), 1) == i]
        for start in range(0, len(mine), 4):
            chunk = [(u, anchor_for(u)) for u in mine[start:start + 4]]
            if chunk:
                draft.body_parts.append(_short_block(chunk, "archive:"))

    # -- bulk bodies: off-topic, chained to each other
    for i, url in enumerate(deep_urls):
        draft = drafts[url]
        draft.body_parts.append(_paragraph(rng, offish, 60))
        _assign_date(draft, rng)
        if len(deep_urls) > 1:
            nxt = deep_urls[(i + 1) % len(deep_urls)]
            draft.body_parts.append(_short_block([(nxt, anchor_for(nxt))], "next:"))

    # -- fresh bodies: topical, interlinked so unposted pages have inlinks
    for i, url in enumerate(fresh_urls):
        draft = drafts[url]
        draft.body_parts.append(_paragraph(rng, freshish, 65))
        peers = []
        if len(fresh_urls) > 1:
            for step in (1, 13, 41):
                peer = fresh_urls[(i + step) % len(fresh_urls)]
                if peer != url and peer not in peers:
                    peers.append(peer)
        draft.body_parts.append(_paragraph(
            rng, freshish, 60, links=[(u, anchor_for(u)) for u in peers]))
        _assign_date(draft, rng)

    # -- foreign bodies
    for i, url in enumerate(foreign_urls):
        draft = drafts[url]
        pick = list(_RU_SENTENCES)
        rng.shuffle(pick)
        draft.body_parts.append("<p>" + " ".join(pick) + "</p>")
        _assign_date(draft, rng)

    for url, draft in drafts.items():
        server.add(draft.host, draft.path, _render(draft))

    # -- post stream: matchers for the fresh cluster, duplicates, decoys
    unposted = {fresh_urls[i] for i in range(len(fresh_urls)) if i % 9 == 4}
    posted = [u for u in fresh_urls if u not in unposted]

    alias_targets = rng.sample(posted, min(12, len(posted)))
    redirect_aliases: dict[str, str] = {}
    for k, target in enumerate(alias_targets):
        alias = server.add_redirect(FRESH_HOSTS[0], f"/r/{k}", target)
        redirect_aliases[alias] = target

    match_phrases = [
        "cases climbing in the {w} district #outbreak",
        "epidemic briefing from the {w} desk",
        "ward capacity strained near the {w} clinic #outbreak",
        "epidemic teams heading to the {w} region",
    ]
    decoy_phrases = [
        "great match at the {w} stadium tonight #sports",
        "new recipe from the {w} kitchen #cooking",
        "festival lineup for the {w} stage announced",
    ]
    authors = ["healthdesk", "fieldwire", "regionreport", "deskwatch"]

    raw_posts: list[tuple[str, str, str]] = []  # (kind, url_for_post, text)
    for url in posted:
        shown = next((a for a, t in redirect_aliases.items() if t == url), url)
        phrase = rng.choice(match_phrases).format(w=rng.choice(NEUTRAL_WORDS))
        raw_posts.append(("match", shown, f"{phrase} {shown}"))
    n_decoys = min(35, len(deep_urls)) if deep_urls else 0
    for k in range(n_decoys):
        target = deep_urls[(k * 3) % len(deep_urls)]
        phrase = rng.choice(decoy_phrases).format(w=rng.choice(OFF_WORDS))
        raw_posts.append(("decoy", target, f"{phrase} {target}"))
    n_dupes = max(0, 200 - len(raw_posts)) if posted else 0
    for k in range(n_dupes):
        url = posted[(k * 11) % len(posted)]
        shown = next((a for a, t in redirect_aliases.items() if t == url), url)
        phrase = rng.choice(match_phrases).format(w=rng.choice(NEUTRAL_WORDS))
        raw_posts.append(("dupe", shown, f"{phrase} again {shown}"))

    rng.shuffle(raw_posts)
    posts: list[dict] = []
    stamp = now - timedelta(minutes=40)
    for k, (kind, post_url, text) in enumerate(raw_posts):
        stamp = stamp + timedelta(seconds=rng.uniform(1.5, 3.0))
        posts.append({
            "id": f"post-{k}-{kind}",
            "author": rng.choice(authors),
            "created_at": stamp.astimezone(UTC).isoformat(),
            "text": text,
            "urls": [post_url],
        })

    spec = {
        "seed_urls": list(seed_urls),
        "keywords": ["outbreak", "vaccine trial"],
        "queries": [{"terms": ["epidemic"]}, {"hashtags": ["outbreak"]}],
        "language": "en",
    }

    return SyntheticWorld(
        now=now, port=port, spec=spec, groups=groups,
        created={u: d.created for u, d in drafts.items()},
        feature={u: d.feature for u, d in drafts.items()},
        posts=posts, posted_urls=posted, redirect_aliases=redirect_aliases,
    )
