"""WARC/1.0 export of stored crawl content.

Each fetched page becomes a response record carrying a reconstructed
HTTP/1.1 message (status line, stored headers, body) plus a linked metadata
record with the crawler's per-page JSON (relevance, freshness, provenance).
Stored social posts are exported as resource records with a urn:post URI,
which is a local convention. Records can be individually gzipped, off by
default.
"""

from __future__ import annotations

import gzip
import hashlib
import io
import json
import os
import uuid
from base64 import b32encode
from datetime import datetime

from .dateparse import UTC
from .storage import ContentStore, MetadataStore

WARC_VERSION = "WARC/1.0"
DEFAULT_SOFTWARE = "freshcrawl/0.1"


def _warc_date(dt: datetime) -> str:
    return dt.astimezone(UTC).strftime("%Y-%m-%dT%H:%M:%SZ")


def _record_id() -> str:
    return f"<urn:uuid:{uuid.uuid4()}>"


def payload_digest(body: bytes) -> str:
    return "sha1:" + b32encode(hashlib.sha1(body).digest()).decode("ascii")


def _write_record(fp, headers: list[tuple[str, str]], block: bytes, compress: bool) -> None:
    buf = io.BytesIO()
    buf.write(f"{WARC_VERSION}\r\n".encode("ascii"))
    for name, value in headers:
        buf.write(f"{name}: {value}\r\n".encode("utf-8"))
    buf.write(f"Content-Length: {len(block)}\r\n".encode("ascii"))
    buf.write(b"\r\n")
    buf.write(block)
    buf.write(b"\r\n\r\n")
    raw = buf.getvalue()
    if compress:
        fp.write(gzip.compress(raw))
    else:
        fp.write(raw)


def _http_block(record) -> bytes:
    reason = {200: "OK", 301: "Moved Permanently", 302: "Found", 304: "Not Modified"}
    status_line = f"HTTP/1.1 {record.status} {reason.get(record.status, 'Status')}\r\n"
    lines = [status_line]
    for name, value in record.headers.items():
        lines.append(f"{name}: {value}\r\n")
    head = "".join(lines).encode("utf-8") + b"\r\n"
    return head + record.body


def export_warc(content: ContentStore, meta: MetadataStore, out_path: str,
                crawl_id: str, spec_digest: str,
                software: str = DEFAULT_SOFTWARE,
                gzip_records: bool = False,
                include_posts: bool = True) -> int:
    """Write one WARC file; returns the number of records written.

    A failed export never leaves a partial file behind.
    """
    written = 0
    tmp_path = out_path + ".part"
    try:
        with open(tmp_path, "wb") as fp:
            info_payload = (
                f"software: {software}\r\n"
                f"format: WARC file version 1.0\r\n"
                f"crawl-id: {crawl_id}\r\n"
                f"crawl-spec-digest: {spec_digest}\r\n"
            ).encode("utf-8")
            _write_record(fp, [
                ("WARC-Type", "warcinfo"),
                ("WARC-Record-ID", _record_id()),
                ("WARC-Date", _warc_date(datetime.now(UTC))),
                ("WARC-Filename", os.path.basename(out_path)),
                ("Content-Type", "application/warc-fields"),
            ], info_payload, gzip_records)
            written += 1

            for record in content.iter_records():
                response_id = _record_id()
                block = _http_block(record)
                _write_record(fp, [
                    ("WARC-Type", "response"),
                    ("WARC-Record-ID", response_id),
                    ("WARC-Date", _warc_date(record.fetch_time)),
                    ("WARC-Target-URI", record.url),
                    ("WARC-Payload-Digest", payload_digest(record.body)),
                    ("Content-Type", "application/http; msgtype=response"),
                ], block, gzip_records)
                written += 1

                page = meta.get_page(record.url)
                meta_payload = {
                    "url": record.url,
                    "final_url": record.final_url,
                    "fetch_time": _warc_date(record.fetch_time),
                }
                if page is not None:
                    meta_payload.update({
                        "batch": page.batch,
                        "relevance": page.relevance,
                        "freshness_hours": page.freshness_hours,
                        "creation_time": _warc_date(page.creation_time) if page.creation_time else None,
                        "date_feature": page.date_feature,
                        "language": page.language,
                        "source": page.source,
                        "inlinks": page.inlinks,
                    })
                _write_record(fp, [
                    ("WARC-Type", "metadata"),
                    ("WARC-Record-ID", _record_id()),
                    ("WARC-Concurrent-To", response_id),
                    ("WARC-Date", _warc_date(record.fetch_time)),
                    ("WARC-Target-URI", record.url),
                    ("Content-Type", "application/json"),
                ], json.dumps(meta_payload, sort_keys=True).encode("utf-8"), gzip_records)
                written += 1

            if include_posts:
                for post in meta.iter_posts():
                    _write_record(fp, [
                        ("WARC-Type", "resource"),
                        ("WARC-Record-ID", _record_id()),
                        ("WARC-Date", _warc_date(post.created_at)),
                        # local convention: posts are not web resources
                        ("WARC-Target-URI", f"urn:post:{post.id}"),
                        ("Content-Type", "application/json"),
                    ], json.dumps(post.to_json(), sort_keys=True).encode("utf-8"), gzip_records)
                    written += 1
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise
    os.replace(tmp_path, out_path)
    return written
