"""Crawl persistence: raw content segments, metadata database, metrics CSV.

The content store appends fetched payloads to segmented flat files with a
line-oriented offset index, so a crawl can resume appending after a restart
and an export can stream records in insertion order. Metadata (per-page
scores, dates, provenance, posts, batch reports) lives in a single sqlite
file; writes become durable at the batch-boundary flush.
"""

from __future__ import annotations

import csv
import json
import os
import sqlite3
import threading
from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterator

from .dateparse import UTC
from .fetch import FetchedPage
from .injectors import SocialPost


def _rfc3339(dt: datetime) -> str:
    return dt.astimezone(UTC).isoformat()


def _parse_rfc3339(value: str) -> datetime:
    return datetime.fromisoformat(value)


@dataclass
class ContentRecord:
    record_id: int
    url: str
    final_url: str
    status: int
    content_type: str
    fetch_time: datetime
    headers: dict[str, str]
    body: bytes


class ContentStore:
    """Append-only segmented page payloads addressed by record id."""

    def __init__(self, directory: str, segment_max_bytes: int = 64 * 1024 * 1024):
        self.directory = directory
        self.segment_max_bytes = segment_max_bytes
        os.makedirs(directory, exist_ok=True)
        self._index_path = os.path.join(directory, "index.tsv")
        self._lock = threading.Lock()
        self._index: dict[int, tuple[str, int, int]] = {}
        self._next_id = 1
        self._open_segment: str | None = None
        self._open_fp = None
        self._load_index()

    def _load_index(self):
        if not os.path.exists(self._index_path):
            return
        with open(self._index_path, encoding="utf-8") as fp:
            for line in fp:
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 4:
                    continue
                rid, segment, offset, length = int(parts[0]), parts[1], int(parts[2]), int(parts[3])
                self._index[rid] = (segment, offset, length)
                self._next_id = max(self._next_id, rid + 1)

    def _segment_path(self, name: str) -> str:
        return os.path.join(self.directory, name)

    def _segment_for_append(self) -> tuple[str, object]:
        if self._open_fp is not None:
            if self._open_fp.tell() < self.segment_max_bytes:
                return self._open_segment, self._open_fp
            self._open_fp.close()
            self._open_fp = None
        existing = sorted(n for n in os.listdir(self.directory) if n.startswith("seg-"))
        if existing:
            last = existing[-1]
            if os.path.getsize(self._segment_path(last)) < self.segment_max_bytes:
                name = last
            else:
                name = f"seg-{len(existing):05d}.dat"
        else:
            name = "seg-00000.dat"
        self._open_segment = name
        self._open_fp = open(self._segment_path(name), "ab")
        return name, self._open_fp

    def put(self, page: FetchedPage) -> int:
        """Append one fetched page; returns its record id."""
        with self._lock:
            rid = self._next_id
            self._next_id += 1
            header = {
                "record_id": rid,
                "url": page.url,
                "final_url": page.final_url,
                "status": page.status,
                "content_type": page.content_type,
                "fetch_time": _rfc3339(page.fetch_time),
                "headers": page.headers,
                "body_len": len(page.body),
            }
            blob = json.dumps(header, ensure_ascii=False).encode("utf-8") + b"\n" + page.body + b"\n"
            segment, fp = self._segment_for_append()
            offset = fp.tell()
            fp.write(blob)
            fp.flush()  # reads go through separate handles
            self._index[rid] = (segment, offset, len(blob))
            with open(self._index_path, "a", encoding="utf-8") as idx:
                idx.write(f"{rid}\t{segment}\t{offset}\t{len(blob)}\n")
            return rid

    def _record_from_blob(self, blob: bytes) -> ContentRecord:
        header_raw, rest = blob.split(b"\n", 1)
        header = json.loads(header_raw)
        body = rest[: header["body_len"]]
        return ContentRecord(
            record_id=header["record_id"], url=header["url"],
            final_url=header["final_url"], status=header["status"],
            content_type=header["content_type"],
            fetch_time=_parse_rfc3339(header["fetch_time"]),
            headers=header["headers"], body=body,
        )

    def get(self, record_id: int) -> ContentRecord:
        with self._lock:
            segment, offset, length = self._index[record_id]
        with open(self._segment_path(segment), "rb") as fp:
            fp.seek(offset)
            return self._record_from_blob(fp.read(length))

    def __len__(self) -> int:
        with self._lock:
            return len(self._index)

    def iter_records(self) -> Iterator[ContentRecord]:
        with self._lock:
            ids = sorted(self._index)
        for rid in ids:
            yield self.get(rid)

    def flush(self):
        with self._lock:
            if self._open_fp is not None:
                self._open_fp.flush()
                os.fsync(self._open_fp.fileno())

    def close(self):
        with self._lock:
            if self._open_fp is not None:
                self._open_fp.close()
                self._open_fp = None


@dataclass
class MetadataRecord:
    """Everything the crawler knows about one URL it finished with."""

    url: str
    status: str                      # fetched | failed
    batch: int | None = None
    relevance: float | None = None
    freshness_hours: float | None = None
    creation_time: datetime | None = None
    date_feature: str | None = None
    language: str | None = None
    source: str | None = None
    host: str | None = None
    fetch_time: datetime | None = None
    content_record_id: int | None = None
    failure_kind: str | None = None
    inlinks: list = field(default_factory=list)


_SCHEMA = """
CREATE TABLE IF NOT EXISTS pages (
    url TEXT PRIMARY KEY,
    status TEXT NOT NULL,
    batch INTEGER,
    relevance REAL,
    freshness_hours REAL,
    creation_time TEXT,
    date_feature TEXT,
    language TEXT,
    source TEXT,
    host TEXT,
    fetch_time TEXT,
    content_record_id INTEGER,
    failure_kind TEXT,
    inlinks TEXT
);
CREATE TABLE IF NOT EXISTS posts (
    id TEXT PRIMARY KEY,
    author TEXT,
    created_at TEXT,
    text TEXT,
    urls TEXT
);
CREATE TABLE IF NOT EXISTS batch_reports (
    batch INTEGER PRIMARY KEY,
    fetched INTEGER NOT NULL,
    failed INTEGER NOT NULL,
    avg_relevance REAL,
    avg_freshness_hours REAL,
    per_host TEXT
);
CREATE TABLE IF NOT EXISTS crawl_meta (
    key TEXT PRIMARY KEY,
    value TEXT
);
"""


class MetadataStore:
    """Single-file sqlite store for page metadata, posts and batch reports."""

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.executescript(_SCHEMA)
        self._conn.commit()

    # ---- pages ---------------------------------------------------------------

    def put_page(self, record: MetadataRecord) -> None:
        with self._lock:
            self._conn.execute(
                """INSERT INTO pages (url, status, batch, relevance, freshness_hours,
                       creation_time, date_feature, language, source, host, fetch_time,
                       content_record_id, failure_kind, inlinks)
                   VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?)
                   ON CONFLICT(url) DO UPDATE SET
                       status=excluded.status, batch=excluded.batch,
                       relevance=excluded.relevance,
                       freshness_hours=excluded.freshness_hours,
                       creation_time=excluded.creation_time,
                       date_feature=excluded.date_feature,
                       language=excluded.language, source=excluded.source,
                       host=excluded.host, fetch_time=excluded.fetch_time,
                       content_record_id=excluded.content_record_id,
                       failure_kind=excluded.failure_kind,
                       inlinks=excluded.inlinks""",
                (
                    record.url, record.status, record.batch, record.relevance,
                    record.freshness_hours,
                    _rfc3339(record.creation_time) if record.creation_time else None,
                    record.date_feature, record.language, record.source, record.host,
                    _rfc3339(record.fetch_time) if record.fetch_time else None,
                    record.content_record_id, record.failure_kind,
                    json.dumps(record.inlinks),
                ),
            )

    def _row_to_record(self, row) -> MetadataRecord:
        return MetadataRecord(
            url=row[0], status=row[1], batch=row[2], relevance=row[3],
            freshness_hours=row[4],
            creation_time=_parse_rfc3339(row[5]) if row[5] else None,
            date_feature=row[6], language=row[7], source=row[8], host=row[9],
            fetch_time=_parse_rfc3339(row[10]) if row[10] else None,
            content_record_id=row[11], failure_kind=row[12],
            inlinks=json.loads(row[13]) if row[13] else [],
        )

    def get_page(self, url: str) -> MetadataRecord | None:
        with self._lock:
            cur = self._conn.execute("SELECT * FROM pages WHERE url=?", (url,))
            row = cur.fetchone()
        return self._row_to_record(row) if row else None

    def iter_pages(self, status: str | None = None, batch: int | None = None) -> list[MetadataRecord]:
        query = "SELECT * FROM pages"
        clauses, params = [], []
        if status is not None:
            clauses.append("status=?")
            params.append(status)
        if batch is not None:
            clauses.append("batch=?")
            params.append(batch)
        if clauses:
            query += " WHERE " + " AND ".join(clauses)
        query += " ORDER BY url"
        with self._lock:
            rows = self._conn.execute(query, params).fetchall()
        return [self._row_to_record(r) for r in rows]

    def page_count(self, status: str | None = None) -> int:
        with self._lock:
            if status is None:
                return self._conn.execute("SELECT COUNT(*) FROM pages").fetchone()[0]
            return self._conn.execute(
                "SELECT COUNT(*) FROM pages WHERE status=?", (status,)).fetchone()[0]

    def top_hosts(self, k: int = 10) -> list[tuple[str, int]]:
        """Hosts by fetched-page count, descending, host name breaking ties."""
        with self._lock:
            rows = self._conn.execute(
                """SELECT host, COUNT(*) AS n FROM pages
                   WHERE status='fetched' AND host IS NOT NULL
                   GROUP BY host ORDER BY n DESC, host ASC LIMIT ?""", (k,),
            ).fetchall()
        return [(r[0], r[1]) for r in rows]

    # ---- posts ---------------------------------------------------------------

    def put_post(self, post: SocialPost) -> bool:
        """Store a post; returns False when its id was already present."""
        with self._lock:
            cur = self._conn.execute(
                "INSERT OR IGNORE INTO posts (id, author, created_at, text, urls) VALUES (?,?,?,?,?)",
                (post.id, post.author, _rfc3339(post.created_at), post.text,
                 json.dumps(list(post.urls))),
            )
            return cur.rowcount > 0

    def iter_posts(self) -> list[SocialPost]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT id, author, created_at, text, urls FROM posts ORDER BY created_at, id"
            ).fetchall()
        return [
            SocialPost(id=r[0], author=r[1], created_at=_parse_rfc3339(r[2]),
                       text=r[3], urls=tuple(json.loads(r[4])))
            for r in rows
        ]

    def post_count(self) -> int:
        with self._lock:
            return self._conn.execute("SELECT COUNT(*) FROM posts").fetchone()[0]

    # ---- batch reports ---------------------------------------------------------

    def put_batch_report(self, batch: int, fetched: int, failed: int,
                         avg_relevance: float | None,
                         avg_freshness_hours: float | None,
                         per_host: dict[str, int]) -> None:
        with self._lock:
            self._conn.execute(
                """INSERT OR REPLACE INTO batch_reports
                   (batch, fetched, failed, avg_relevance, avg_freshness_hours, per_host)
                   VALUES (?,?,?,?,?,?)""",
                (batch, fetched, failed, avg_relevance, avg_freshness_hours,
                 json.dumps(per_host, sort_keys=True)),
            )

    def batch_report_rows(self, from_batch: int = 0) -> list[tuple]:
        with self._lock:
            return self._conn.execute(
                """SELECT batch, fetched, failed, avg_relevance, avg_freshness_hours, per_host
                   FROM batch_reports WHERE batch >= ? ORDER BY batch""",
                (from_batch,),
            ).fetchall()

    # ---- crawl meta ---------------------------------------------------------

    def set_meta(self, key: str, value: str) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR REPLACE INTO crawl_meta (key, value) VALUES (?,?)", (key, value))

    def get_meta(self, key: str) -> str | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT value FROM crawl_meta WHERE key=?", (key,)).fetchone()
        return row[0] if row else None

    def flush(self) -> None:
        with self._lock:
            self._conn.commit()

    def close(self) -> None:
        with self._lock:
            self._conn.commit()
            self._conn.close()


METRICS_CSV_HEADER = ["batch", "fetched", "failed", "avg_relevance", "avg_freshness_hours"]


def export_metrics_csv(meta: MetadataStore, path: str) -> int:
    """One row per batch; empty cells where an average does not exist."""
    rows = meta.batch_report_rows()
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(METRICS_CSV_HEADER)
        for batch, fetched, failed, avg_rel, avg_fresh, _ in rows:
            writer.writerow([
                batch, fetched, failed,
                "" if avg_rel is None else repr(avg_rel),
                "" if avg_fresh is None else repr(avg_fresh),
            ])
    return len(rows)
