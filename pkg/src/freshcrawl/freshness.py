"""Content-based page creation dates and freshness.

Freshness of a page is the elapsed time between its estimated creation and
the moment it was fetched, in hours. Creation dates are estimated by a
fixed cascade of features, each cheaper and more reliable than the next:

    url      a yyyy/mm/dd or yyyy-mm-dd pattern in the URL path
    time     <time> elements (datetime attribute, then element text)
    meta     date-bearing meta tags, then the Last-Modified header
    trigger  a date within a few tokens after phrases like "updated on"
    content  the first parseable date anywhere in the main text

The first candidate that passes validation wins; invalid candidates (before
1990, or after the fetch time) are skipped and the search continues.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib.resources import files
from urllib.parse import urlsplit

from .dateparse import UTC, parse_datetime_value, scan_dates

FEATURE_ORDER = ("url", "time", "meta", "trigger", "content")

EARLIEST_VALID = datetime(1990, 1, 1, tzinfo=timezone.utc)

_URL_DATE_RE = re.compile(r"(?<!\d)(\d{4})([-/])(\d{1,2})\2(\d{1,2})(?!\d)")

_TRIGGER_WINDOW_TOKENS = 5
_TOKEN_SPAN_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class DateEstimate:
    creation_time: datetime
    feature: str
    raw: str


@dataclass(frozen=True)
class FreshnessRecord:
    url: str
    fetch_time: datetime
    creation_time: datetime
    hours: float


def load_trigger_phrases(path: str | None = None) -> list[str]:
    if path is None:
        raw = files("freshcrawl").joinpath("data/trigger_phrases.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fp:
            raw = fp.read()
    phrases = []
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            phrases.append(line.lower())
    return phrases


_default_triggers: list[str] | None = None


def default_trigger_phrases() -> list[str]:
    global _default_triggers
    if _default_triggers is None:
        _default_triggers = load_trigger_phrases()
    return _default_triggers


def validate_date(candidate: datetime, fetch_time: datetime) -> bool:
    """Plausibility filter: not before 1990, not after the fetch (inclusive)."""
    if candidate.tzinfo is None:
        candidate = candidate.replace(tzinfo=UTC)
    return EARLIEST_VALID <= candidate <= fetch_time


def freshness_hours(fetch_time: datetime, creation_time: datetime) -> float:
    """Elapsed hours between creation and fetch; creation must not be later."""
    delta = (fetch_time - creation_time).total_seconds()
    if delta < 0:
        raise ValueError("creation time is later than fetch time")
    return delta / 3600.0


def _url_candidates(url: str, locale: str):
    path = urlsplit(url).path
    for m in _URL_DATE_RE.finditer(path):
        hits = scan_dates(f"{m.group(1)}-{int(m.group(3)):02d}-{int(m.group(4)):02d}", locale)
        for hit in hits:
            yield hit.when, m.group(0)


def _time_candidates(time_elements, locale: str):
    for attr, text in time_elements:
        if attr:
            dt = parse_datetime_value(attr, locale)
            if dt:
                yield dt, attr
                continue
        if text:
            dt = parse_datetime_value(text, locale)
            if dt:
                yield dt, text


def _meta_candidates(meta_dates, locale: str):
    for key, value in meta_dates:
        dt = parse_datetime_value(value, locale)
        if dt:
            yield dt, f"{key}={value}"


def _trigger_candidates(text: str, phrases, locale: str):
    lowered = text.lower()
    spans = [m.span() for m in _TOKEN_SPAN_RE.finditer(text)]
    occurrences = []
    for phrase in phrases:
        start = 0
        while True:
            idx = lowered.find(phrase, start)
            if idx < 0:
                break
            occurrences.append((idx, idx + len(phrase)))
            start = idx + 1
    occurrences.sort()
    for _, phrase_end in occurrences:
        following = [s for s in spans if s[0] >= phrase_end]
        if not following:
            continue
        window_end = following[min(_TRIGGER_WINDOW_TOKENS, len(following)) - 1][1]
        window = text[phrase_end:window_end]
        for hit in scan_dates(window, locale):
            yield hit.when, hit.raw


def _content_candidates(text: str, locale: str):
    for hit in scan_dates(text, locale):
        yield hit.when, hit.raw


def estimate_creation_date(url: str, fetch_time: datetime, main_text: str = "",
                           time_elements=(), meta_dates=(),
                           trigger_phrases: list[str] | None = None,
                           locale: str = "mdy",
                           trace: list[str] | None = None) -> DateEstimate | None:
    """Run the feature cascade; return the first validated estimate or None.

    `trace`, when given, collects the names of the features consulted, in
    order, so callers can observe that the cascade stopped at the winner.
    """
    if trigger_phrases is None:
        trigger_phrases = default_trigger_phrases()
    feature_sources = (
        ("url", lambda: _url_candidates(url, locale)),
        ("time", lambda: _time_candidates(time_elements, locale)),
        ("meta", lambda: _meta_candidates(meta_dates, locale)),
        ("trigger", lambda: _trigger_candidates(main_text, trigger_phrases, locale)),
        ("content", lambda: _content_candidates(main_text, locale)),
    )
    for name, gen in feature_sources:
        if trace is not None:
            trace.append(name)
        for candidate, raw in gen():
            if validate_date(candidate, fetch_time):
                return DateEstimate(candidate, name, raw)
    return None


def coverage_report(estimates: list[DateEstimate | None]) -> dict[str, float]:
    """Share of pages dated by each feature, plus the unresolved remainder.

    Percentages over the full input; they sum to 100 (within float error)
    whenever the input is non-empty.
    """
    total = len(estimates)
    counts = {name: 0 for name in FEATURE_ORDER}
    unresolved = 0
    for est in estimates:
        if est is None:
            unresolved += 1
        else:
            counts[est.feature] += 1
    if total == 0:
        report = {name: 0.0 for name in FEATURE_ORDER}
        report["unresolved"] = 0.0
        return report
    report = {name: 100.0 * counts[name] / total for name in FEATURE_ORDER}
    report["unresolved"] = 100.0 * unresolved / total
    return report
