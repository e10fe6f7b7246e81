"""Batch crawl engine joining frontier, fetcher, scorers and injectors.

One engine runs one crawl in one of four configurations:

    UN   unfocused baseline: outlinks enqueue at a uniform priority, so the
         queue drains in discovery order; no injectors
    FO   focused: outlinks are scored from their link contexts against the
         reference vector; no injectors
    TB   injected-only: fetches seeds and socially injected URLs, never
         follows outlinks; requires at least one injector
    INT  integrated: focused outlink scoring plus injectors

Each cycle picks a politeness-respecting batch of the highest-priority
queued URLs, fetches them concurrently, then parses, scores, dates and
stores the results sequentially in batch order so discovery order is
reproducible. The crawl stops when the best queued priority falls below the
stop threshold (or the queue empties) and no injector can still add work.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .fetch import (DEFAULT_MAX_BODY_BYTES, DEFAULT_MAX_REDIRECTS,
                    DEFAULT_TIMEOUT_S, DEFAULT_USER_AGENT, FetchedPage,
                    FetchError, FetchPolicy, HostThrottle, RobotsCache, fetch)
from .freshness import (default_trigger_phrases, estimate_creation_date,
                        freshness_hours, load_trigger_phrases)
from .frontier import (SOURCE_SEED, SOURCE_SOCIAL, SOURCE_WEB_LINK, Batch,
                       Frontier)
from .injectors import (Injector, InjectorError, LiveSocialInjector,
                        ReplayInjector, RssInjector, StreamQuery,
                        rewrite_social_url)
from .linkscore import LinkScoreWeights, extract_link_contexts, score_outlinks
from .parse import ParsedDocument, parse
from .storage import (ContentStore, MetadataRecord, MetadataStore,
                      export_metrics_csv)
from .urls import site_of
from .vectorize import (CrawlSpecification, EmptyReferenceError, TermVector,
                        build_document_vector, build_reference_vector,
                        cosine_similarity)

MODES = ("UN", "FO", "TB", "INT")

STARTING = "starting"
RUNNING = "running"
STOPPING = "stopping"
STOPPED = "stopped"
FAILED = "failed"


class CrawlStartupError(ValueError):
    pass


@dataclass(frozen=True)
class CrawlConfig:
    mode: str = "FO"
    batch_size: int = 1000
    stop_threshold: float = 0.05
    max_batches: int | None = None
    link_weights: LinkScoreWeights = field(default_factory=LinkScoreWeights)
    boost_full: float = 2.0
    boost_partial: float = 1.5
    boost_default: float = 1.0
    politeness_delay_ms: int = 2000
    language_filter: bool = True
    respect_robots: bool = True
    fetch_timeout_s: float = DEFAULT_TIMEOUT_S
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES
    max_redirects: int = DEFAULT_MAX_REDIRECTS
    user_agent: str = DEFAULT_USER_AGENT
    workers: int = 8
    uniform_priority: float = 1.0
    idle_timeout_s: float = 30.0
    date_locale: str = "mdy"
    trigger_phrases_path: str | None = None
    replay_file: str | None = None
    replay_speed: float = float("inf")
    resolve_injected_redirects: bool = True
    rss_feeds: tuple[str, ...] = ()
    rss_poll_s: float = 30.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise CrawlStartupError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.batch_size < 1:
            raise CrawlStartupError("batch_size must be >= 1")
        if self.stop_threshold < 0:
            raise CrawlStartupError("stop_threshold must be >= 0")
        if self.workers < 1:
            raise CrawlStartupError("workers must be >= 1")

    @classmethod
    def from_json(cls, data: dict) -> "CrawlConfig":
        if not isinstance(data, dict):
            raise CrawlStartupError("config must be a JSON object")
        kwargs = dict(data)
        lw = kwargs.pop("link_weights", None)
        if lw is not None:
            try:
                kwargs["link_weights"] = LinkScoreWeights(**lw)
            except (TypeError, ValueError) as exc:
                raise CrawlStartupError(f"bad link_weights: {exc}")
        if "rss_feeds" in kwargs:
            kwargs["rss_feeds"] = tuple(kwargs["rss_feeds"])
        if kwargs.get("replay_speed") in ("inf", None) and "replay_speed" in kwargs:
            kwargs["replay_speed"] = float("inf")
        unknown = set(kwargs) - {f.name for f in cls.__dataclass_fields__.values()}
        if unknown:
            raise CrawlStartupError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise CrawlStartupError(str(exc))

    def to_json(self) -> dict:
        out = {
            "mode": self.mode, "batch_size": self.batch_size,
            "stop_threshold": self.stop_threshold, "max_batches": self.max_batches,
            "link_weights": {
                "anchor_weight": self.link_weights.anchor_weight,
                "paragraph_weight": self.link_weights.paragraph_weight,
                "document_weight": self.link_weights.document_weight,
                "min_paragraph_tokens": self.link_weights.min_paragraph_tokens,
            },
            "boost_full": self.boost_full, "boost_partial": self.boost_partial,
            "boost_default": self.boost_default,
            "politeness_delay_ms": self.politeness_delay_ms,
            "language_filter": self.language_filter,
            "respect_robots": self.respect_robots,
            "fetch_timeout_s": self.fetch_timeout_s,
            "max_body_bytes": self.max_body_bytes,
            "max_redirects": self.max_redirects,
            "user_agent": self.user_agent, "workers": self.workers,
            "uniform_priority": self.uniform_priority,
            "idle_timeout_s": self.idle_timeout_s,
            "date_locale": self.date_locale,
            "replay_file": self.replay_file,
            "replay_speed": "inf" if self.replay_speed == float("inf") else self.replay_speed,
            "rss_feeds": list(self.rss_feeds), "rss_poll_s": self.rss_poll_s,
        }
        return out


@dataclass
class BatchReport:
    batch_number: int
    fetched_count: int
    failed_count: int
    avg_relevance: float | None
    avg_freshness_hours: float | None
    per_host_counts: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "batch_number": self.batch_number,
            "fetched_count": self.fetched_count,
            "failed_count": self.failed_count,
            "avg_relevance": self.avg_relevance,
            "avg_freshness_hours": self.avg_freshness_hours,
            "per_host_counts": dict(self.per_host_counts),
        }


def spec_digest(spec: CrawlSpecification) -> str:
    canonical = json.dumps(spec.to_json(), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class CrawlEngine:
    """Runs one crawl to completion on a background thread."""

    def __init__(self, spec: CrawlSpecification, config: CrawlConfig, out_dir: str,
                 crawl_id: str | None = None, live_adapter=None):
        self.spec = spec
        self.config = config
        self.out_dir = out_dir
        self.crawl_id = crawl_id or uuid.uuid4().hex[:12]
        self.state = STARTING
        self.diagnostic: str | None = None
        os.makedirs(out_dir, exist_ok=True)

        self._validate_mode(live_adapter)

        self.frontier = Frontier(politeness_delay_ms=config.politeness_delay_ms)
        self.content = ContentStore(os.path.join(out_dir, "content"))
        self.meta = MetadataStore(os.path.join(out_dir, "metadata.db"))
        self.policy = FetchPolicy(
            timeout_s=config.fetch_timeout_s, max_body_bytes=config.max_body_bytes,
            max_redirects=config.max_redirects, user_agent=config.user_agent,
            respect_robots=config.respect_robots,
        )
        self.throttle = HostThrottle(config.politeness_delay_ms)
        self.robots = RobotsCache() if config.respect_robots else None
        self.reference = None
        self._live_adapter = live_adapter
        self._trigger_phrases = (load_trigger_phrases(config.trigger_phrases_path)
                                 if config.trigger_phrases_path else default_trigger_phrases())
        self._injectors: list[Injector] = []
        self._seed_cache: dict[str, FetchedPage | FetchError] = {}
        self._reports: list[BatchReport] = []
        self._report_cond = threading.Condition()
        self._local = threading.local()
        self._stop_event = threading.Event()
        self._state_lock = threading.RLock()
        self._summary: dict | None = None
        self._loop_thread: threading.Thread | None = None
        self._started_at: datetime | None = None
        self._injected_url_count = 0

    # ---- startup -----------------------------------------------------------

    def _validate_mode(self, live_adapter) -> None:
        mode = self.config.mode
        has_injector_config = bool(self.config.replay_file or self.config.rss_feeds
                                   or live_adapter is not None)
        if mode in ("UN", "FO", "INT") and not self.spec.seed_urls:
            raise CrawlStartupError(f"mode {mode} requires at least one seed URL")
        if mode in ("TB", "INT") and not has_injector_config:
            raise CrawlStartupError(f"mode {mode} requires a configured injector "
                                    "(replay_file, rss_feeds or a live adapter)")
        if mode in ("UN", "FO") and has_injector_config:
            raise CrawlStartupError(f"mode {mode} does not take injectors")
        if mode in ("TB", "INT") and not self.spec.social_queries:
            raise CrawlStartupError(f"mode {mode} requires at least one stream query")

    def _session(self):
        session = getattr(self._local, "session", None)
        if session is None:
            import requests
            session = requests.Session()
            self._local.session = session
        return session

    def start(self) -> None:
        """Prefetch seeds, build the reference vector, start injectors and loop.

        Raises CrawlStartupError before any background work begins when the
        crawl cannot run.
        """
        try:
            self._startup()
        except CrawlStartupError:
            self.state = FAILED
            raise
        except EmptyReferenceError as exc:
            self.state = FAILED
            raise CrawlStartupError(str(exc))
        self.state = RUNNING
        self._loop_thread = threading.Thread(target=self._loop, daemon=True,
                                             name=f"crawl-{self.crawl_id}")
        self._loop_thread.start()

    def _startup(self) -> None:
        self._started_at = datetime.now(timezone.utc)
        self.meta.set_meta("crawl_id", self.crawl_id)
        self.meta.set_meta("mode", self.config.mode)
        self.meta.set_meta("spec", json.dumps(self.spec.to_json(), sort_keys=True))
        self.meta.set_meta("config", json.dumps(self.config.to_json(), sort_keys=True))
        self.meta.set_meta("spec_digest", spec_digest(self.spec))
        self.meta.set_meta("started_at", self._started_at.isoformat())
        self.meta.flush()

        seed_texts: list[str] = []
        for url in self.spec.seed_urls:
            try:
                page = fetch(url, self.policy, session=self._session(),
                             throttle=self.throttle, robots=self.robots)
                self._seed_cache[url] = page
                parsed = parse(page)
                if parsed.main_text:
                    seed_texts.append(parsed.main_text)
            except FetchError as err:
                self._seed_cache[url] = err

        needs_reference = self.config.mode in ("FO", "INT")
        if self.spec.seed_urls and not any(
                isinstance(v, FetchedPage) for v in self._seed_cache.values()):
            raise CrawlStartupError("none of the seed URLs could be fetched")
        if seed_texts:
            try:
                self.reference = build_reference_vector(
                    seed_texts, self.spec.keywords, self.spec.language,
                    self.config.boost_full, self.config.boost_partial,
                    self.config.boost_default,
                )
            except EmptyReferenceError:
                if needs_reference:
                    raise
        elif needs_reference:
            raise CrawlStartupError("seed documents produced an empty reference vector")

        for url in self.spec.seed_urls:
            self.frontier.inject(url, 1.0, SOURCE_SEED)

        self._start_injectors()

    def _frontier_sink(self, url: str, priority: float, source: str) -> bool:
        try:
            fresh = self.frontier.inject(url, priority, source)
        except ValueError:
            return False
        if fresh:
            self._injected_url_count += 1
        return fresh

    def _start_injectors(self) -> None:
        if self.config.mode not in ("TB", "INT"):
            return
        queries = list(self.spec.social_queries)
        post_sink = self.meta.put_post
        common = dict(queries=queries, frontier_sink=self._frontier_sink,
                      post_sink=post_sink,
                      resolve=self.config.resolve_injected_redirects,
                      max_redirect_hops=self.config.max_redirects)
        try:
            if self.config.replay_file:
                if not os.path.exists(self.config.replay_file):
                    raise CrawlStartupError(f"replay file not found: {self.config.replay_file}")
                self._injectors.append(ReplayInjector(
                    path=self.config.replay_file, speed=self.config.replay_speed, **common))
            if self.config.rss_feeds:
                self._injectors.append(RssInjector(
                    feed_urls=list(self.config.rss_feeds),
                    poll_interval_s=self.config.rss_poll_s, **common))
            if self._live_adapter is not None:
                self._injectors.append(LiveSocialInjector(
                    adapter=self._live_adapter, **common))
        except InjectorError as exc:
            raise CrawlStartupError(str(exc))
        for injector in self._injectors:
            injector.start()

    # ---- main loop -----------------------------------------------------------

    def _injectors_alive(self) -> bool:
        return any(i.is_alive() for i in self._injectors)

    def _idle_wait(self) -> bool:
        """Wait for new work; False means the crawl should stop."""
        deadline = time.monotonic() + self.config.idle_timeout_s
        while not self._stop_event.is_set() and time.monotonic() < deadline:
            time.sleep(0.05)
            if not self.frontier.should_stop(self.config.stop_threshold):
                return True
            if not self._injectors_alive():
                return False
        return False

    def _loop(self) -> None:
        try:
            while not self._stop_event.is_set():
                if (self.config.max_batches is not None
                        and len(self._reports) >= self.config.max_batches):
                    break
                if self.frontier.should_stop(self.config.stop_threshold):
                    if self._injectors_alive() and self._idle_wait():
                        continue
                    break
                batch = self.frontier.next_batch(self.config.batch_size)
                if not batch.entries:
                    # everything eligible is politeness-blocked right now
                    if self._idle_wait():
                        continue
                    break
                report = self._process_batch(batch)
                self._publish_report(report)
        except Exception as exc:  # crawl abort: storage or logic failure
            with self._state_lock:
                self.state = FAILED
                self.diagnostic = f"{type(exc).__name__}: {exc}"
        finally:
            self._finish()

    def _fetch_entry(self, url: str):
        cached = self._seed_cache.pop(url, None)
        if cached is not None:
            return cached
        try:
            return fetch(url, self.policy, session=self._session(),
                         throttle=self.throttle, robots=self.robots)
        except FetchError as err:
            return err

    def _process_batch(self, batch: Batch) -> BatchReport:
        entries = batch.entries
        results: dict[str, FetchedPage | FetchError] = {}
        max_workers = min(self.config.workers, len(entries))
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = {pool.submit(self._fetch_entry, e.url): e.url for e in entries}
            for future in as_completed(futures):
                results[futures[future]] = future.result()

        fetched = failed = 0
        relevances: list[float] = []
        freshnesses: list[float] = []
        per_host: dict[str, int] = {}
        for entry in entries:  # sequential, in batch order: deterministic discovery
            outcome = results[entry.url]
            inlinks = [
                {"delta": c.delta, "source": c.source, "contributor": c.contributor,
                 "counted": c.counted}
                for c in self.frontier.contributions(entry.url)
            ]
            if isinstance(outcome, FetchError):
                failed += 1
                self.frontier.mark_failed(entry.url, outcome.kind)
                self.meta.put_page(MetadataRecord(
                    url=entry.url, status="failed", batch=batch.number,
                    source=entry.source, host=site_of(entry.url),
                    failure_kind=outcome.kind, inlinks=inlinks,
                ))
                continue
            page = outcome
            fetched += 1
            record_id = self.content.put(page)
            parsed = parse(page)
            doc_vector = TermVector()
            relevance = None
            if self.reference is not None:
                if parsed.is_html:
                    doc_vector = build_document_vector(parsed.main_text, self.spec.language)
                relevance = cosine_similarity(doc_vector, self.reference.vector)
            estimate = estimate_creation_date(
                url=entry.url, fetch_time=page.fetch_time, main_text=parsed.main_text,
                time_elements=parsed.time_elements, meta_dates=parsed.meta_dates,
                trigger_phrases=self._trigger_phrases, locale=self.config.date_locale,
            )
            fresh_hours = (freshness_hours(page.fetch_time, estimate.creation_time)
                           if estimate else None)
            eligible = (not self.config.language_filter
                        or parsed.language == self.spec.language)
            if eligible:
                if relevance is not None:
                    relevances.append(relevance)
                if fresh_hours is not None:
                    freshnesses.append(fresh_hours)
            host = site_of(entry.url)
            per_host[host] = per_host.get(host, 0) + 1
            self.meta.put_page(MetadataRecord(
                url=entry.url, status="fetched", batch=batch.number,
                relevance=relevance, freshness_hours=fresh_hours,
                creation_time=estimate.creation_time if estimate else None,
                date_feature=estimate.feature if estimate else None,
                language=parsed.language, source=entry.source, host=host,
                fetch_time=page.fetch_time, content_record_id=record_id,
                inlinks=inlinks,
            ))
            self.frontier.mark_done(entry.url)
            self._handle_outlinks(entry.url, parsed, doc_vector)

        report = BatchReport(
            batch_number=batch.number, fetched_count=fetched, failed_count=failed,
            avg_relevance=sum(relevances) / len(relevances) if relevances else None,
            avg_freshness_hours=sum(freshnesses) / len(freshnesses) if freshnesses else None,
            per_host_counts=per_host,
        )
        return report

    def _handle_outlinks(self, page_url: str, parsed: ParsedDocument,
                         doc_vector: TermVector) -> None:
        mode = self.config.mode
        if mode == "TB":
            return
        if mode == "UN":
            for url in parsed.outlinks:
                try:
                    self.frontier.inject(url, self.config.uniform_priority, SOURCE_WEB_LINK)
                except ValueError:
                    continue
            return
        # FO / INT: score link contexts against the reference vector
        if not parsed.is_html or parsed.element_tree is None:
            # structured API payload: its URLs came from social content
            if mode == "INT":
                for url in parsed.outlinks:
                    try:
                        self.frontier.inject(url, 1.0, SOURCE_SOCIAL)
                    except ValueError:
                        continue
            return
        if self.reference is None:
            return
        contexts = extract_link_contexts(
            parsed.element_tree, parsed.base_url,
            self.config.link_weights.min_paragraph_tokens,
        )
        scores = score_outlinks(contexts, doc_vector, self.reference,
                                self.config.link_weights, self.spec.language)
        for s in scores:
            try:
                self.frontier.add_inlink_score(s.target_url, s.combined, contributor=page_url)
            except ValueError:
                continue
            if mode == "INT":
                api_url = rewrite_social_url(s.target_url)
                if api_url:
                    self.frontier.add_inlink_score(api_url, s.combined, contributor=page_url)

    def _publish_report(self, report: BatchReport) -> None:
        self.meta.put_batch_report(
            report.batch_number, report.fetched_count, report.failed_count,
            report.avg_relevance, report.avg_freshness_hours, report.per_host_counts,
        )
        self.meta.flush()
        self.content.flush()
        self.frontier.save(os.path.join(self.out_dir, "frontier.json"))
        with self._report_cond:
            self._reports.append(report)
            self._report_cond.notify_all()

    # ---- lifecycle ------------------------------------------------------------

    def _finish(self) -> None:
        for injector in self._injectors:
            injector.stop()
        with self._state_lock:
            if self.state not in (FAILED,):
                self.state = STOPPED
            finished_at = datetime.now(timezone.utc)
            top_sites = self.meta.top_hosts(10)
            summary = {
                "crawl_id": self.crawl_id,
                "mode": self.config.mode,
                "state": self.state,
                "batches": len(self._reports),
                "total_fetched": self.meta.page_count("fetched"),
                "total_failed": self.meta.page_count("failed"),
                "stored_posts": self.meta.post_count(),
                "injected_urls": self._injected_url_count,
                "frontier": self.frontier.counts(),
                "top_sites": [[host, count] for host, count in top_sites],
                "started_at": self._started_at.isoformat() if self._started_at else None,
                "finished_at": finished_at.isoformat(),
                "diagnostic": self.diagnostic,
            }
            self.meta.set_meta("summary", json.dumps(summary, sort_keys=True))
            self.meta.flush()
            try:
                self.frontier.save(os.path.join(self.out_dir, "frontier.json"))
                export_metrics_csv(self.meta, os.path.join(self.out_dir, "metrics.csv"))
            except OSError:
                pass
            self._summary = summary
        with self._report_cond:
            self._report_cond.notify_all()

    def stop(self, timeout: float = 60.0) -> dict:
        """Request a stop at the next batch boundary and wait; idempotent."""
        self._stop_event.set()
        thread = self._loop_thread
        if thread is not None and thread.is_alive() and thread is not threading.current_thread():
            with self._state_lock:
                if self.state == RUNNING:
                    self.state = STOPPING
            thread.join(timeout)
        with self._state_lock:
            if self._summary is None:
                # loop thread never ran (startup failure path)
                self._finish()
            return dict(self._summary)

    def wait(self, timeout: float | None = None) -> bool:
        thread = self._loop_thread
        if thread is None:
            return True
        thread.join(timeout)
        return not thread.is_alive()

    def running(self) -> bool:
        thread = self._loop_thread
        return thread is not None and thread.is_alive()

    # ---- introspection ---------------------------------------------------------

    def reports(self, from_batch: int = 0) -> list[BatchReport]:
        with self._report_cond:
            return [r for r in self._reports if r.batch_number >= from_batch]

    def wait_for_report(self, after_batch: int, timeout: float = 5.0) -> list[BatchReport]:
        """Reports past after_batch, waiting for the next one if none yet."""
        deadline = time.monotonic() + timeout
        with self._report_cond:
            while True:
                newer = [r for r in self._reports if r.batch_number > after_batch]
                if newer or not self.running():
                    return newer
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return []
                self._report_cond.wait(remaining)

    def update_queries(self, queries: list[StreamQuery]) -> None:
        """Swap the standing queries on every live injector."""
        live = [i for i in self._injectors if i.status == "running"]
        if not live:
            raise InjectorError("crawl has no running injectors to steer")
        for injector in live:
            injector.update_queries(queries)

    def status(self) -> dict:
        with self._state_lock:
            state = self.state
        counts = self.frontier.counts()
        return {
            "crawl_id": self.crawl_id,
            "state": state,
            "mode": self.config.mode,
            "current_batch": len(self._reports),
            "frontier_size": len(self.frontier),
            "frontier_counts": counts,
            "queued_max_score": self.frontier.max_queued_score(),
            "totals": {
                "fetched": self.meta.page_count("fetched"),
                "failed": self.meta.page_count("failed"),
                "stored_posts": self.meta.post_count(),
                "injected_urls": self._injected_url_count,
            },
            "injectors": [
                {"kind": i.kind, "status": i.status, "diagnostic": i.diagnostic}
                for i in self._injectors
            ],
        }

    def close(self) -> None:
        self.meta.close()
        self.content.close()


def start_crawl(spec: CrawlSpecification, config: CrawlConfig, out_dir: str,
                crawl_id: str | None = None, live_adapter=None) -> CrawlEngine:
    """Validate, construct and start an engine; raises CrawlStartupError."""
    engine = CrawlEngine(spec, config, out_dir, crawl_id=crawl_id,
                         live_adapter=live_adapter)
    engine.start()
    return engine
