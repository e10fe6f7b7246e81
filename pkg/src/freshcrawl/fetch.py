"""Polite HTTP fetching with robots.txt, timeouts, size and redirect caps.

Failures are reported as FetchError with a machine-readable kind so the
engine can count and store them distinctly:

    timeout      connect or read timeout
    dns          name resolution failure
    network      other connection-level failure
    http_status  final status >= 400
    robots       disallowed by the host's robots.txt
    oversize     body exceeded the configured cap
    redirects    redirect chain exceeded the cap
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from urllib import robotparser
from urllib.parse import urlsplit, urlunsplit

import requests

from .urls import host_of

DEFAULT_TIMEOUT_S = 30.0
DEFAULT_MAX_BODY_BYTES = 10 * 1024 * 1024
DEFAULT_MAX_REDIRECTS = 5
DEFAULT_USER_AGENT = "freshcrawl/0.1"

_DNS_MARKERS = ("NameResolutionError", "getaddrinfo", "Name or service not known",
                "nodename nor servname", "Temporary failure in name resolution")


class FetchError(Exception):
    def __init__(self, kind: str, detail: str = ""):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind
        self.detail = detail


@dataclass(frozen=True)
class FetchPolicy:
    timeout_s: float = DEFAULT_TIMEOUT_S
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES
    max_redirects: int = DEFAULT_MAX_REDIRECTS
    user_agent: str = DEFAULT_USER_AGENT
    respect_robots: bool = True


@dataclass
class FetchedPage:
    url: str
    final_url: str
    status: int
    headers: dict[str, str]
    body: bytes
    content_type: str
    fetch_time: datetime


class HostThrottle:
    """Serializes fetches per host and enforces a minimum delay between them."""

    def __init__(self, delay_ms: int):
        self.delay_s = max(0, delay_ms) / 1000.0
        self._lock = threading.Lock()
        self._last_start: dict[str, float] = {}
        self._host_locks: dict[str, threading.Lock] = {}

    def _lock_for(self, host: str) -> threading.Lock:
        with self._lock:
            lock = self._host_locks.get(host)
            if lock is None:
                lock = threading.Lock()
                self._host_locks[host] = lock
            return lock

    def acquire(self, host: str) -> None:
        """Block until a request to the host is allowed, then claim the slot."""
        if self.delay_s <= 0:
            return
        host_lock = self._lock_for(host)
        with host_lock:
            with self._lock:
                last = self._last_start.get(host)
            if last is not None:
                wait = last + self.delay_s - time.monotonic()
                if wait > 0:
                    time.sleep(wait)
            with self._lock:
                self._last_start[host] = time.monotonic()


class RobotsCache:
    """Per-host robots.txt decisions with a TTL; unavailable files allow all."""

    def __init__(self, ttl_s: float = 3600.0):
        self.ttl_s = ttl_s
        self._lock = threading.Lock()
        self._cache: dict[str, tuple[float, robotparser.RobotFileParser | None]] = {}

    def _fetch_rules(self, url: str, policy: FetchPolicy,
                     session: requests.Session,
                     throttle: HostThrottle | None) -> robotparser.RobotFileParser | None:
        parts = urlsplit(url)
        robots_url = urlunsplit((parts.scheme, parts.netloc, "/robots.txt", "", ""))
        if throttle is not None:
            throttle.acquire(host_of(url))
        try:
            resp = session.get(robots_url, timeout=policy.timeout_s,
                               headers={"User-Agent": policy.user_agent})
        except requests.RequestException:
            return None
        if resp.status_code >= 400:
            return None
        parser = robotparser.RobotFileParser()
        parser.parse(resp.text.splitlines())
        return parser

    def allowed(self, url: str, policy: FetchPolicy, session: requests.Session,
                throttle: HostThrottle | None = None) -> bool:
        host = host_of(url)
        now = time.monotonic()
        with self._lock:
            entry = self._cache.get(host)
        if entry is None or now - entry[0] > self.ttl_s:
            rules = self._fetch_rules(url, policy, session, throttle)
            with self._lock:
                self._cache[host] = (now, rules)
        else:
            rules = entry[1]
        if rules is None:
            return True
        return rules.can_fetch(policy.user_agent, url)


def _scrubbed_headers(resp: requests.Response, body: bytes) -> dict[str, str]:
    # the body is stored decoded, so hop-by-hop encodings must not survive
    headers = {}
    for name, value in resp.headers.items():
        if name.lower() in ("transfer-encoding", "content-encoding", "content-length"):
            continue
        headers[name] = value
    headers["Content-Length"] = str(len(body))
    return headers


def fetch(url: str, policy: FetchPolicy | None = None,
          session: requests.Session | None = None,
          throttle: HostThrottle | None = None,
          robots: RobotsCache | None = None) -> FetchedPage:
    """GET one URL under the policy; raises FetchError on any failure."""
    policy = policy or FetchPolicy()
    if session is None:
        session = requests.Session()
    session.max_redirects = policy.max_redirects
    if policy.respect_robots and robots is not None:
        if not robots.allowed(url, policy, session, throttle):
            raise FetchError("robots", url)
    if throttle is not None:
        throttle.acquire(host_of(url))
    try:
        resp = session.get(
            url, timeout=policy.timeout_s, stream=True, allow_redirects=True,
            headers={"User-Agent": policy.user_agent},
        )
    except requests.Timeout as exc:
        raise FetchError("timeout", str(exc)) from exc
    except requests.TooManyRedirects as exc:
        raise FetchError("redirects", str(exc)) from exc
    except requests.ConnectionError as exc:
        text = repr(exc)
        kind = "dns" if any(marker in text for marker in _DNS_MARKERS) else "network"
        raise FetchError(kind, str(exc)) from exc
    except requests.RequestException as exc:
        raise FetchError("network", str(exc)) from exc
    with resp:
        if resp.status_code >= 400:
            raise FetchError("http_status", f"{resp.status_code} for {url}")
        chunks: list[bytes] = []
        size = 0
        try:
            for chunk in resp.iter_content(64 * 1024):
                size += len(chunk)
                if size > policy.max_body_bytes:
                    raise FetchError("oversize", f"{size} bytes exceeds cap for {url}")
                chunks.append(chunk)
        except requests.Timeout as exc:
            raise FetchError("timeout", str(exc)) from exc
        except requests.RequestException as exc:
            raise FetchError("network", str(exc)) from exc
        body = b"".join(chunks)
        return FetchedPage(
            url=url,
            final_url=resp.url,
            status=resp.status_code,
            headers=_scrubbed_headers(resp, body),
            body=body,
            content_type=resp.headers.get("Content-Type", ""),
            fetch_time=datetime.now(timezone.utc),
        )
