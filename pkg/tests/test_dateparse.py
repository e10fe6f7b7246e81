from datetime import datetime, timezone

import pytest

from freshcrawl.dateparse import parse_datetime_value, scan_dates

UTC = timezone.utc


def single(text, **kw):
    hits = scan_dates(text, **kw)
    assert len(hits) == 1, hits
    return hits[0]


class TestScanDates:
    def test_iso_date(self):
        hit = single("report filed 2014-11-07 by the desk")
        assert hit.when == datetime(2014, 11, 7, tzinfo=UTC)
        assert hit.raw == "2014-11-07"

    def test_iso_datetime_with_offset(self):
        hit = single("at 2014-11-07T15:30:00+02:00 sharp")
        assert hit.when == datetime(2014, 11, 7, 13, 30, tzinfo=UTC)

    def test_iso_datetime_zulu(self):
        hit = single("stamp 2014-11-07T15:30:00Z end")
        assert hit.when == datetime(2014, 11, 7, 15, 30, tzinfo=UTC)

    def test_month_name_mdy(self):
        hit = single("seen on November 7, 2014 in print")
        assert hit.when == datetime(2014, 11, 7, tzinfo=UTC)

    def test_month_name_dmy(self):
        hit = single("seen on 7 November 2014 in print")
        assert hit.when == datetime(2014, 11, 7, tzinfo=UTC)

    def test_abbreviated_month(self):
        hit = single("dated Nov 7, 2014")
        assert hit.when == datetime(2014, 11, 7, tzinfo=UTC)

    def test_dotted_is_day_first(self):
        hit = single("Stand vom 07.11.2014 laut Bericht")
        assert hit.when == datetime(2014, 11, 7, tzinfo=UTC)

    def test_slash_default_month_first(self):
        hit = single("filed 11/07/2014 by noon")
        assert hit.when == datetime(2014, 11, 7, tzinfo=UTC)

    def test_slash_dmy_locale(self):
        hit = single("filed 11/07/2014 by noon", locale="dmy")
        assert hit.when == datetime(2014, 7, 11, tzinfo=UTC)

    def test_slash_autoswap_when_first_exceeds_twelve(self):
        # 13 cannot be a month, so the fields swap even under mdy
        hit = single("filed 13/07/2014 by noon")
        assert hit.when == datetime(2014, 7, 13, tzinfo=UTC)

    def test_invalid_calendar_date_skipped(self):
        assert scan_dates("around 2014-02-30 maybe") == []

    def test_no_dates(self):
        assert scan_dates("no numbers that look like dates here") == []

    def test_multiple_hits_ordered(self):
        hits = scan_dates("from 2014-01-02 until March 4, 2014 inclusive")
        assert [h.when for h in hits] == [
            datetime(2014, 1, 2, tzinfo=UTC),
            datetime(2014, 3, 4, tzinfo=UTC),
        ]

    def test_overlap_prefers_earliest_then_longest(self):
        # the full ISO timestamp wins over its embedded date-only prefix
        hits = scan_dates("x 2014-11-07T15:30:00Z y")
        assert len(hits) == 1
        assert hits[0].when == datetime(2014, 11, 7, 15, 30, tzinfo=UTC)

    def test_spans_index_source_text(self):
        text = "before 2014-11-07 after"
        hit = single(text)
        assert text[hit.start:hit.end] == hit.raw

    def test_digit_runs_do_not_match(self):
        # long digit runs around a pattern must not produce phantom dates
        assert scan_dates("code 920141107 x") == []


class TestParseDatetimeValue:
    def test_rfc2822(self):
        got = parse_datetime_value("Fri, 07 Nov 2014 15:30:00 GMT")
        assert got == datetime(2014, 11, 7, 15, 30, tzinfo=UTC)

    def test_rfc2822_with_offset(self):
        got = parse_datetime_value("Fri, 07 Nov 2014 15:30:00 +0200")
        assert got == datetime(2014, 11, 7, 13, 30, tzinfo=UTC)

    def test_iso(self):
        assert parse_datetime_value("2014-11-07T15:30:00Z") == datetime(
            2014, 11, 7, 15, 30, tzinfo=UTC)

    def test_day_only(self):
        assert parse_datetime_value("2014-11-07") == datetime(2014, 11, 7, tzinfo=UTC)

    def test_textual(self):
        assert parse_datetime_value("November 7, 2014") == datetime(2014, 11, 7, tzinfo=UTC)

    def test_unparseable(self):
        assert parse_datetime_value("yesterday") is None
        assert parse_datetime_value("") is None

    def test_result_always_utc(self):
        for value in ("2014-11-07T01:00:00+09:00", "Fri, 07 Nov 2014 15:30:00 -0500"):
            got = parse_datetime_value(value)
            assert got is not None and got.tzinfo is UTC or got.utcoffset().total_seconds() == 0
