"""A 50-page labeled corpus for the date cascade: ten pages per feature.

Every page is labeled with the feature that must resolve it and the exact
creation instant it must yield. Several pages carry decoy dates at a later
cascade stage (which must lose) or invalid candidates at an earlier or the
same stage (pre-1990 or in the future, which must be skipped). Filler prose
is digit-free and avoids the bundled trigger phrases, so no page can
resolve through an unintended feature.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from freshcrawl.fetch import FetchedPage

UTC = timezone.utc
FETCH_TIME = datetime(2014, 11, 10, 12, 0, tzinfo=UTC)


@dataclass(frozen=True)
class LabeledPage:
    page: FetchedPage
    feature: str
    created: datetime
    note: str


def _page(url: str, html: str, headers: dict[str, str] | None = None) -> FetchedPage:
    return FetchedPage(
        url=url, final_url=url, status=200, headers=headers or {},
        body=html.encode("utf-8"), content_type="text/html; charset=utf-8",
        fetch_time=FETCH_TIME,
    )


def _html(title: str, body_paragraphs: list[str], head_extra: str = "") -> str:
    paras = "\n".join(f"<p>{p}</p>" for p in body_paragraphs)
    return (f"<html><head><title>{title}</title>{head_extra}</head>\n"
            f"<body><h1>{title}</h1>\n{paras}\n</body></html>")


_FILLER = [
    "Relief coordinators toured the eastern clinics and spoke with attending staff.",
    "Supply convoys reached the river crossings before the seasonal rains began.",
    "Community volunteers handed out containment guidance near the market square.",
    "The surveillance desk compiled regional summaries for the evening briefing.",
]


def _url_pages() -> list[LabeledPage]:
    pages = []
    for i in range(10):
        day = datetime(2014, 2, 3 + i, tzinfo=UTC)
        if i < 5:
            path = f"/news/{day:%Y/%m/%d}/regional-health-briefing"
        else:
            path = f"/blog/{day:%Y-%m-%d}-field-notes"
        body = list(_FILLER[:2])
        note = f"url variant {i}"
        if i == 9:
            # later-stage decoy: a content date that must lose to the URL
            body.append("Observers compared the findings with notes from March 1, 2013 as well.")
            note += " + content decoy"
        pages.append(LabeledPage(
            _page(f"http://corpus-url.example{path}", _html("Briefing archive", body)),
            "url", day, note))
    return pages


def _time_pages() -> list[LabeledPage]:
    decoy = "An older survey circulated around March 1, 2010 is also referenced."
    cases = [
        ('<time datetime="2014-06-03T08:15:00Z">this week</time>',
         datetime(2014, 6, 3, 8, 15, tzinfo=UTC), "attr, Z suffix"),
        ('<time datetime="2014-06-04T10:30:00+02:00">recently</time>',
         datetime(2014, 6, 4, 8, 30, tzinfo=UTC), "attr, +02:00 offset"),
        ('<time datetime="2014-06-05">earlier</time>',
         datetime(2014, 6, 5, tzinfo=UTC), "attr, day resolution"),
        ('<time datetime="yesterday">5 June 2014</time>',
         datetime(2014, 6, 5, tzinfo=UTC), "unparseable attr, text fallback"),
        ('<time>June 6, 2014</time>',
         datetime(2014, 6, 6, tzinfo=UTC), "no attr, text only"),
        ('<time datetime="2014-06-07T23:59:59Z">January 1, 2013</time>',
         datetime(2014, 6, 7, 23, 59, 59, tzinfo=UTC), "attr beats conflicting text"),
        ('<time datetime="2015-02-01T00:00:00Z">soon</time> '
         '<time datetime="2014-06-08T06:00:00Z">that morning</time>',
         datetime(2014, 6, 8, 6, 0, tzinfo=UTC), "future attr rejected, second wins"),
        ('<time datetime="2014-06-09T12:00:30.500Z">midday</time>',
         datetime(2014, 6, 9, 12, 0, 30, tzinfo=UTC), "fractional seconds truncate"),
        ('<time>09.06.2014</time>',
         datetime(2014, 6, 9, tzinfo=UTC), "dotted text date, day first"),
        ('<time datetime="Tue, 10 Jun 2014 04:00:00 GMT">overnight</time>',
         datetime(2014, 6, 10, 4, 0, tzinfo=UTC), "RFC 2822 attr"),
    ]
    pages = []
    for i, (markup, created, note) in enumerate(cases):
        body = [_FILLER[i % len(_FILLER)], f"Filed {markup} by the desk.", decoy]
        pages.append(LabeledPage(
            _page(f"http://corpus-time.example/desk/story-{chr(97 + i)}",
                  _html("Desk report", body)),
            "time", created, note))
    return pages


def _meta_pages() -> list[LabeledPage]:
    decoy = "Comparable figures appeared in a bulletin around March 2, 2010 as well."
    cases: list[tuple[str, dict[str, str], datetime, str]] = [
        ('<meta name="date" content="2014-07-01T09:00:00Z">', {},
         datetime(2014, 7, 1, 9, 0, tzinfo=UTC), "name=date, ISO"),
        ('<meta property="article:published_time" content="2014-07-02T12:45:00+01:00">', {},
         datetime(2014, 7, 2, 11, 45, tzinfo=UTC), "property key, offset"),
        ('<meta name="pubdate" content="2014-07-03">', {},
         datetime(2014, 7, 3, tzinfo=UTC), "pubdate, day resolution"),
        ('<meta itemprop="datePublished" content="July 4, 2014">', {},
         datetime(2014, 7, 4, tzinfo=UTC), "itemprop, textual date"),
        ('<meta http-equiv="last-modified" content="Sat, 05 Jul 2014 16:20:00 GMT">', {},
         datetime(2014, 7, 5, 16, 20, tzinfo=UTC), "http-equiv, RFC 2822"),
        ("", {"Last-Modified": "Sun, 06 Jul 2014 08:00:00 GMT"},
         datetime(2014, 7, 6, 8, 0, tzinfo=UTC), "header only"),
        ("", {"Last-Modified": "Mon, 07 Jul 2014 19:05:00 GMT"},
         datetime(2014, 7, 7, 19, 5, tzinfo=UTC), "header only, evening"),
        ('<meta name="dc.date" content="2014-07-08">', {},
         datetime(2014, 7, 8, tzinfo=UTC), "dublin core key"),
        ('<meta name="date" content="2015-12-01">'
         '<meta name="publishdate" content="2014-07-09T10:00:00Z">', {},
         datetime(2014, 7, 9, 10, 0, tzinfo=UTC), "future first meta rejected"),
        ('<meta name="dcterms.created" content="1989-12-31">'
         '<meta name="timestamp" content="2014-07-10T14:30:00Z">', {},
         datetime(2014, 7, 10, 14, 30, tzinfo=UTC), "pre-1990 first meta rejected"),
    ]
    pages = []
    for i, (head, headers, created, note) in enumerate(cases):
        body = [_FILLER[i % len(_FILLER)], decoy]
        pages.append(LabeledPage(
            _page(f"http://corpus-meta.example/wire/item-{chr(97 + i)}",
                  _html("Wire item", body, head_extra=head), headers),
            "meta", created, note))
    return pages


def _trigger_pages() -> list[LabeledPage]:
    cases = [
        ("Updated on March 5, 2014 by the regional desk.",
         datetime(2014, 3, 5, tzinfo=UTC), "updated on, month-name date"),
        ("Published on 2014-03-06 at the latest.",
         datetime(2014, 3, 6, tzinfo=UTC), "published on, ISO date"),
        ("Posted on 7 March 2014 from the field office.",
         datetime(2014, 3, 7, tzinfo=UTC), "posted on, day-first date"),
        ("Last modified 03/08/2014 during the editorial review.",
         datetime(2014, 3, 8, tzinfo=UTC), "last modified, slash date"),
        ("Veröffentlicht am 12.03.2014 in der Redaktion.",
         datetime(2014, 3, 12, tzinfo=UTC), "german phrase, dotted date"),
        ("The bulletin was updated on April 2, 2014 after the briefing.",
         datetime(2014, 4, 2, tzinfo=UTC), "phrase mid-sentence"),
        ("Notes published on 2014-04-03 cover the vaccination rollout.",
         datetime(2014, 4, 3, tzinfo=UTC), "published on, ISO date"),
        ("Posted on April 4, 2014.",
         datetime(2014, 4, 4, tzinfo=UTC), "date at end of text"),
        ("Updated on January 1, 2088 according to the notice. "
         "Published on April 5, 2014 for the record.",
         datetime(2014, 4, 5, tzinfo=UTC), "future trigger date rejected"),
        ("UPDATED ON May 6, 2014 across all mirrors.",
         datetime(2014, 5, 6, tzinfo=UTC), "case-insensitive phrase"),
    ]
    pages = []
    for i, (line, created, note) in enumerate(cases):
        body = [_FILLER[i % len(_FILLER)], line, _FILLER[(i + 1) % len(_FILLER)]]
        pages.append(LabeledPage(
            _page(f"http://corpus-trigger.example/notes/entry-{chr(97 + i)}",
                  _html("Field notes", body)),
            "trigger", created, note))
    return pages


def _content_pages() -> list[LabeledPage]:
    cases: list[tuple[list[str], str, datetime, str]] = [
        (["Field notes from March 3, 2014 describe the clinic expansion.",
          "A later tally from June 9, 2014 appears further down."],
         "", datetime(2014, 3, 3, tzinfo=UTC), "first of two dates wins"),
        (["The assessment window closed early, see the 2014-03-04 records."],
         "", datetime(2014, 3, 4, tzinfo=UTC), "ISO in prose"),
        (["Teams arrived by ferry; the log entry for 4 March 2014 lists names."],
         "", datetime(2014, 3, 4, tzinfo=UTC), "day-first in prose"),
        (["Checkpoint screening began 03/05/2014 along the coastal road."],
         "", datetime(2014, 3, 5, tzinfo=UTC), "slash date, month first"),
        (["Die Lage vom 12.03.2014 bleibt angespannt, so der Bericht."],
         "", datetime(2014, 3, 12, tzinfo=UTC), "dotted date, day first"),
        (["Clinic rosters mention April 9, 2014 as the handover point."],
         '<meta name="date" content="2015-06-01">',
         datetime(2014, 4, 9, tzinfo=UTC), "future meta rejected, content wins"),
        (["Archive coverage recalls 1989-12-30 events briefly.",
          "The analysis itself reflects the April 10, 2014 session."],
         "", datetime(2014, 4, 10, tzinfo=UTC), "pre-1990 content date skipped"),
        (["Supply ledgers for May 11, 2014 balance against the manifests.",
          "A follow-up audit on 2014-08-01 confirmed the totals."],
         "", datetime(2014, 5, 11, tzinfo=UTC), "first of two dates wins"),
        (["Projections cite 2015-01-01 as a milestone.",
          "Actual intake lists began on 2014-05-12 according to the registry."],
         "", datetime(2014, 5, 12, tzinfo=UTC), "future content date skipped"),
        (["The morning roundup of November 10, 2014 went out before noon."],
         "", datetime(2014, 11, 10, tzinfo=UTC), "creation equals fetch day"),
    ]
    pages = []
    for i, (lines, head, created, note) in enumerate(cases):
        body = [_FILLER[i % len(_FILLER)]] + lines
        pages.append(LabeledPage(
            _page(f"http://corpus-content.example/journal/page-{chr(97 + i)}",
                  _html("Journal entry", body, head_extra=head)),
            "content", created, note))
    return pages


def build_corpus() -> list[LabeledPage]:
    corpus = (_url_pages() + _time_pages() + _meta_pages()
              + _trigger_pages() + _content_pages())
    assert len(corpus) == 50
    return corpus
