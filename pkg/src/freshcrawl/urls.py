"""URL normalization shared by the frontier, parser and injectors.

All URLs stored in the frontier or compared for identity go through
normalize_url first, so "first discovery" semantics do not depend on
cosmetic differences (case of the host, default ports, dot segments,
fragments).
"""

from __future__ import annotations

from urllib.parse import urlsplit, urlunsplit


def _remove_dot_segments(path: str) -> str:
    segments = path.split("/")
    out: list[str] = []
    for seg in segments:
        if seg == ".":
            continue
        if seg == "..":
            if len(out) > 1:
                out.pop()
            continue
        out.append(seg)
    # a trailing "." or ".." still names a directory
    if segments and segments[-1] in (".", "..") and (not out or out[-1] != ""):
        out.append("")
    joined = "/".join(out)
    if not joined.startswith("/"):
        joined = "/" + joined
    return joined


def normalize_url(url: str) -> str:
    """Canonical form: lowercase scheme/host, no fragment, dot segments resolved.

    Raises ValueError for anything that is not an absolute http(s)-style URL.
    """
    parts = urlsplit(url.strip())
    if not parts.scheme or not parts.netloc:
        raise ValueError(f"not an absolute URL: {url!r}")
    scheme = parts.scheme.lower()
    netloc = parts.netloc.lower()
    if scheme == "http" and netloc.endswith(":80"):
        netloc = netloc[: -len(":80")]
    elif scheme == "https" and netloc.endswith(":443"):
        netloc = netloc[: -len(":443")]
    path = _remove_dot_segments(parts.path) if parts.path else "/"
    return urlunsplit((scheme, netloc, path, parts.query, ""))


def is_http_url(url: str) -> bool:
    try:
        parts = urlsplit(url)
    except ValueError:
        return False
    return parts.scheme in ("http", "https") and bool(parts.netloc)


def host_of(url: str) -> str:
    """Politeness key: lowercased host including any explicit port."""
    return urlsplit(url).netloc.lower()


def site_of(url: str) -> str:
    """Reporting key: hostname without port."""
    host = urlsplit(url).hostname
    return host.lower() if host else ""
