"""Priority frontier with first-discovery URLs and per-host politeness.

Every URL appears at most once for the life of a crawl, whatever state it
is in. A queued URL's priority is the running sum of the relevance
contributions of the pages linking to it; injected URLs (seeds, social,
RSS) enter at a fixed priority instead. Contributions arriving after a URL
left the queued state are logged for traceability but never change its
score or position.

Batch selection orders queued entries by (score desc, discovered_at asc,
url asc) and skips entries whose host was fetched more recently than the
politeness delay allows, including hosts already picked for the current
batch. Selected entries move to the fetching state atomically.
"""

from __future__ import annotations

import csv
import json
import os
import threading
import time
from dataclasses import dataclass, field, replace

from .urls import host_of, normalize_url

QUEUED = "queued"
FETCHING = "fetching"
DONE = "done"
FAILED = "failed"

SOURCE_SEED = "seed"
SOURCE_WEB_LINK = "web_link"
SOURCE_SOCIAL = "social_injection"
SOURCE_RSS = "rss_injection"

INJECTION_PRIORITY = 1.0


class FrontierError(ValueError):
    pass


@dataclass
class FrontierEntry:
    url: str
    host: str
    score: float
    discovered_at: float
    source: str
    state: str = QUEUED
    failure: str | None = None


@dataclass
class Contribution:
    url: str
    delta: float
    source: str
    contributor: str | None
    counted: bool
    at: float


@dataclass
class Batch:
    number: int
    entries: list[FrontierEntry] = field(default_factory=list)


class Frontier:
    def __init__(self, politeness_delay_ms: int = 2000):
        if politeness_delay_ms < 0:
            raise FrontierError("politeness delay must be >= 0")
        self.politeness_delay_s = politeness_delay_ms / 1000.0
        self._entries: dict[str, FrontierEntry] = {}
        self._contributions: list[Contribution] = []
        self._host_last_fetch: dict[str, float] = {}
        self._batches_taken = 0
        self._lock = threading.RLock()

    # ---- intake -------------------------------------------------------------

    def inject(self, url: str, priority: float = INJECTION_PRIORITY,
               source: str = SOURCE_SOCIAL, now: float | None = None,
               contributor: str | None = None) -> bool:
        """Add a URL at a fixed priority; False when it was already known.

        Re-injecting a known URL changes nothing, whatever state the entry
        is in: first discovery wins.
        """
        if not (priority >= 0):
            raise FrontierError(f"invalid priority {priority!r}")
        url = normalize_url(url)
        at = time.monotonic() if now is None else now
        with self._lock:
            if url in self._entries:
                self._contributions.append(
                    Contribution(url, priority, source, contributor, False, at))
                return False
            self._entries[url] = FrontierEntry(
                url=url, host=host_of(url), score=priority,
                discovered_at=at, source=source,
            )
            self._contributions.append(
                Contribution(url, priority, source, contributor, True, at))
            return True

    def add_inlink_score(self, url: str, delta: float, now: float | None = None,
                         contributor: str | None = None) -> float:
        """Accumulate a linking page's contribution onto a URL's priority.

        Unknown URLs are discovered as web links with the delta as their
        initial score. Contributions to entries no longer queued are logged
        uncounted; the returned value is the entry's current score either way.
        """
        if not (delta >= 0):
            raise FrontierError(f"invalid score delta {delta!r}")
        url = normalize_url(url)
        at = time.monotonic() if now is None else now
        with self._lock:
            entry = self._entries.get(url)
            if entry is None:
                self._entries[url] = FrontierEntry(
                    url=url, host=host_of(url), score=delta,
                    discovered_at=at, source=SOURCE_WEB_LINK,
                )
                self._contributions.append(
                    Contribution(url, delta, SOURCE_WEB_LINK, contributor, True, at))
                return delta
            if entry.state == QUEUED:
                entry.score += delta
                self._contributions.append(
                    Contribution(url, delta, SOURCE_WEB_LINK, contributor, True, at))
            else:
                self._contributions.append(
                    Contribution(url, delta, SOURCE_WEB_LINK, contributor, False, at))
            return entry.score

    # ---- batch selection ----------------------------------------------------

    def next_batch(self, n: int, now: float | None = None) -> Batch:
        """Move up to n queued entries to fetching and return them.

        The batch is smaller than n only when fewer queued entries are
        currently eligible (queue exhausted or hosts held back by
        politeness). Batch numbers count non-empty batches, gap-free.
        """
        if n < 1:
            raise FrontierError("batch size must be >= 1")
        at = time.monotonic() if now is None else now
        with self._lock:
            candidates = sorted(
                (e for e in self._entries.values() if e.state == QUEUED),
                key=lambda e: (-e.score, e.discovered_at, e.url),
            )
            picked: list[FrontierEntry] = []
            picked_hosts: set[str] = set()
            for entry in candidates:
                if len(picked) >= n:
                    break
                if self.politeness_delay_s > 0:
                    if entry.host in picked_hosts:
                        continue
                    last = self._host_last_fetch.get(entry.host)
                    if last is not None and at - last < self.politeness_delay_s:
                        continue
                entry.state = FETCHING
                picked_hosts.add(entry.host)
                self._host_last_fetch[entry.host] = at
                picked.append(entry)
            if not picked:
                return Batch(number=self._batches_taken, entries=[])
            self._batches_taken += 1
            return Batch(number=self._batches_taken,
                         entries=[replace(e) for e in picked])

    def mark_done(self, url: str) -> None:
        self._transition(url, DONE, None)

    def mark_failed(self, url: str, reason: str | None = None) -> None:
        self._transition(url, FAILED, reason)

    def _transition(self, url: str, state: str, failure: str | None) -> None:
        url = normalize_url(url)
        with self._lock:
            entry = self._entries.get(url)
            if entry is None:
                raise FrontierError(f"unknown URL {url!r}")
            if entry.state != FETCHING:
                raise FrontierError(f"cannot finish {url!r} from state {entry.state!r}")
            entry.state = state
            entry.failure = failure

    # ---- inspection ---------------------------------------------------------

    def entry(self, url: str) -> FrontierEntry | None:
        with self._lock:
            found = self._entries.get(normalize_url(url))
            return replace(found) if found else None

    def contributions(self, url: str | None = None) -> list[Contribution]:
        with self._lock:
            if url is None:
                return list(self._contributions)
            url = normalize_url(url)
            return [c for c in self._contributions if c.url == url]

    def max_queued_score(self) -> float | None:
        with self._lock:
            queued = [e.score for e in self._entries.values() if e.state == QUEUED]
            return max(queued) if queued else None

    def should_stop(self, threshold: float) -> bool:
        """True when the queue is empty or its best score fell below threshold."""
        best = self.max_queued_score()
        return best is None or best < threshold

    def top_queued(self, k: int) -> list[FrontierEntry]:
        with self._lock:
            queued = sorted(
                (e for e in self._entries.values() if e.state == QUEUED),
                key=lambda e: (-e.score, e.discovered_at, e.url),
            )
            return [replace(e) for e in queued[:k]]

    def counts(self) -> dict[str, int]:
        with self._lock:
            out = {QUEUED: 0, FETCHING: 0, DONE: 0, FAILED: 0}
            for e in self._entries.values():
                out[e.state] += 1
            return out

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    # ---- persistence --------------------------------------------------------

    def snapshot_csv(self, fp) -> int:
        """Write url,score,state,source,discovered_at rows; returns row count."""
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["url", "score", "state", "source", "discovered_at"])
        with self._lock:
            entries = sorted(self._entries.values(), key=lambda e: e.url)
            for e in entries:
                writer.writerow([e.url, repr(e.score), e.state, e.source, repr(e.discovered_at)])
            return len(entries)

    def state_dict(self) -> dict:
        with self._lock:
            return {
                "politeness_delay_ms": int(self.politeness_delay_s * 1000),
                "batches_taken": self._batches_taken,
                "host_last_fetch": dict(self._host_last_fetch),
                "entries": [
                    {"url": e.url, "host": e.host, "score": e.score,
                     "discovered_at": e.discovered_at, "source": e.source,
                     "state": e.state, "failure": e.failure}
                    for e in self._entries.values()
                ],
                "contributions": [
                    {"url": c.url, "delta": c.delta, "source": c.source,
                     "contributor": c.contributor, "counted": c.counted, "at": c.at}
                    for c in self._contributions
                ],
            }

    def save(self, path: str) -> None:
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fp:
            json.dump(self.state_dict(), fp)
        os.replace(tmp, path)

    @classmethod
    def from_state(cls, state: dict) -> "Frontier":
        frontier = cls(politeness_delay_ms=state.get("politeness_delay_ms", 2000))
        frontier._batches_taken = state.get("batches_taken", 0)
        frontier._host_last_fetch = dict(state.get("host_last_fetch", {}))
        for raw in state.get("entries", []):
            # snapshots are taken at batch boundaries, so a fetching entry can
            # only come from an interrupted run; give it back to the queue
            state_val = QUEUED if raw["state"] == FETCHING else raw["state"]
            frontier._entries[raw["url"]] = FrontierEntry(
                url=raw["url"], host=raw["host"], score=raw["score"],
                discovered_at=raw["discovered_at"], source=raw["source"],
                state=state_val, failure=raw.get("failure"),
            )
        for raw in state.get("contributions", []):
            frontier._contributions.append(Contribution(
                url=raw["url"], delta=raw["delta"], source=raw["source"],
                contributor=raw.get("contributor"), counted=raw["counted"],
                at=raw["at"],
            ))
        return frontier

    @classmethod
    def load(cls, path: str) -> "Frontier":
        with open(path, encoding="utf-8") as fp:
            return cls.from_state(json.load(fp))
