"""Recognizing date expressions in text, URLs and header values.

Day-resolution dates are anchored at 00:00 UTC. Datetimes carrying a zone
offset are converted to UTC; naive datetimes are assumed UTC. Ambiguous
all-numeric slash dates follow the configured locale order (month-first by
default) but swap automatically when the first component cannot be a month.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from email.utils import parsedate_to_datetime

MONTHS = {
    "january": 1, "jan": 1, "february": 2, "feb": 2, "march": 3, "mar": 3,
    "april": 4, "apr": 4, "may": 5, "june": 6, "jun": 6, "july": 7, "jul": 7,
    "august": 8, "aug": 8, "september": 9, "sept": 9, "sep": 9,
    "october": 10, "oct": 10, "november": 11, "nov": 11, "december": 12, "dec": 12,
}

_MONTH_ALT = "|".join(sorted(MONTHS, key=len, reverse=True))

_ISO_RE = re.compile(
    r"(?<![\d-])(\d{4})-(\d{2})-(\d{2})"
    r"(?:[T ](\d{2}):(\d{2})(?::(\d{2})(?:\.\d+)?)?\s*(Z|[+-]\d{2}:?\d{2})?)?",
)
_DMY_RE = re.compile(
    rf"\b(\d{{1,2}})(?:st|nd|rd|th)?\.?\s+({_MONTH_ALT})\.?,?\s+(\d{{4}})\b",
    re.IGNORECASE,
)
_MDY_RE = re.compile(
    rf"\b({_MONTH_ALT})\.?\s+(\d{{1,2}})(?:st|nd|rd|th)?\s*,?\s+(\d{{4}})\b",
    re.IGNORECASE,
)
_DOTTED_RE = re.compile(r"(?<![\d.])(\d{1,2})\.(\d{1,2})\.(\d{4})(?!\d)")
_SLASH_RE = re.compile(r"(?<![\d/])(\d{1,2})/(\d{1,2})/(\d{4})(?!\d)")

UTC = timezone.utc


@dataclass(frozen=True)
class DateHit:
    start: int
    end: int
    when: datetime
    raw: str


def _make_date(year: int, month: int, day: int,
               hour: int = 0, minute: int = 0, second: int = 0,
               offset: str | None = None) -> datetime | None:
    try:
        dt = datetime(year, month, day, hour, minute, second, tzinfo=UTC)
    except ValueError:
        return None
    if offset and offset != "Z":
        sign = 1 if offset[0] == "+" else -1
        digits = offset[1:].replace(":", "")
        try:
            delta_min = sign * (int(digits[:2]) * 60 + int(digits[2:4] or "0"))
        except ValueError:
            return None
        dt = dt - timedelta(minutes=delta_min)
    return dt


def _iso_hits(text: str):
    for m in _ISO_RE.finditer(text):
        y, mo, d = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if m.group(4) is not None:
            dt = _make_date(y, mo, d, int(m.group(4)), int(m.group(5)),
                            int(m.group(6) or 0), m.group(7))
        else:
            dt = _make_date(y, mo, d)
        if dt:
            yield DateHit(m.start(), m.end(), dt, m.group(0))


def _dmy_hits(text: str):
    for m in _DMY_RE.finditer(text):
        dt = _make_date(int(m.group(3)), MONTHS[m.group(2).lower()], int(m.group(1)))
        if dt:
            yield DateHit(m.start(), m.end(), dt, m.group(0))


def _mdy_hits(text: str):
    for m in _MDY_RE.finditer(text):
        dt = _make_date(int(m.group(3)), MONTHS[m.group(1).lower()], int(m.group(2)))
        if dt:
            yield DateHit(m.start(), m.end(), dt, m.group(0))


def _dotted_hits(text: str):
    # the dotted form is conventionally day-first
    for m in _DOTTED_RE.finditer(text):
        dt = _make_date(int(m.group(3)), int(m.group(2)), int(m.group(1)))
        if dt:
            yield DateHit(m.start(), m.end(), dt, m.group(0))


def _slash_hits(text: str, locale: str):
    for m in _SLASH_RE.finditer(text):
        first, second, year = int(m.group(1)), int(m.group(2)), int(m.group(3))
        month, day = (first, second) if locale == "mdy" else (second, first)
        if month > 12 and day <= 12:
            month, day = day, month
        dt = _make_date(year, month, day)
        if dt:
            yield DateHit(m.start(), m.end(), dt, m.group(0))


def scan_dates(text: str, locale: str = "mdy") -> list[DateHit]:
    """All date expressions in the text, in document order.

    Overlapping matches keep the earliest-starting, then longest, hit.
    """
    hits: list[DateHit] = []
    for gen in (_iso_hits(text), _dmy_hits(text), _mdy_hits(text),
                _dotted_hits(text), _slash_hits(text, locale)):
        hits.extend(gen)
    hits.sort(key=lambda h: (h.start, -(h.end - h.start)))
    chosen: list[DateHit] = []
    last_end = -1
    for hit in hits:
        if hit.start >= last_end:
            chosen.append(hit)
            last_end = hit.end
    return chosen


def parse_datetime_value(value: str, locale: str = "mdy") -> datetime | None:
    """Parse one header/attribute value known to hold a single date.

    Tries RFC 2822 (HTTP date headers), then the textual forms scan_dates
    knows. Returns an aware UTC datetime or None.
    """
    value = value.strip()
    if not value:
        return None
    try:
        dt = parsedate_to_datetime(value)
        if dt is not None:
            if dt.tzinfo is None:
                dt = dt.replace(tzinfo=UTC)
            return dt.astimezone(UTC)
    except (TypeError, ValueError):
        pass
    hits = scan_dates(value, locale)
    return hits[0].when if hits else None
