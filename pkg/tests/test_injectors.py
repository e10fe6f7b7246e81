import json
import time
from datetime import datetime, timedelta, timezone

import pytest

from freshcrawl.frontier import Frontier
from freshcrawl.injectors import (
    InjectorError,
    ReplayInjector,
    RssInjector,
    SocialPost,
    StreamQuery,
    matches,
    resolve_redirects,
    rewrite_social_url,
)

UTC = timezone.utc
T0 = datetime(2014, 11, 7, 12, 0, tzinfo=UTC)


def post(text="", author="someone", urls=(), post_id="p1", created=T0):
    return SocialPost(id=post_id, author=author, created_at=created,
                      text=text, urls=tuple(urls))


class TestStreamQuery:
    def test_strips_prefixes(self):
        q = StreamQuery(hashtags=("#ukraine",), users=("@WHO",))
        assert q.hashtags == ("ukraine",)
        assert q.users == ("WHO",)

    def test_rejects_empty(self):
        with pytest.raises(InjectorError):
            StreamQuery()
        with pytest.raises(InjectorError):
            StreamQuery(terms=("  ",), hashtags=("#",))

    def test_json_roundtrip(self):
        q = StreamQuery.from_json({"terms": ["ebola"], "hashtags": ["#x"], "users": []})
        assert StreamQuery.from_json(q.to_json()) == q


class TestMatching:
    def test_term_is_whole_token(self):
        q = StreamQuery(terms=("ukraine",))
        assert matches(post(text="news from ukraine today"), q)
        # substrings of longer words do not count
        assert not matches(post(text="the ukrainian delegation arrived"), q)

    def test_term_case_insensitive(self):
        q = StreamQuery(terms=("ukraine",))
        assert matches(post(text="UKRAINE latest"), q)

    def test_multiword_term_consecutive(self):
        q = StreamQuery(terms=("vaccine trial",))
        assert matches(post(text="the vaccine trial begins"), q)
        assert not matches(post(text="the vaccine another trial"), q)

    def test_hashtag_membership(self):
        q = StreamQuery(hashtags=("outbreak",))
        assert matches(post(text="tracking #outbreak tonight"), q)
        assert not matches(post(text="tracking outbreak tonight"), q)

    def test_author_exact(self):
        q = StreamQuery(users=("WHO",))
        assert matches(post(author="WHO"), q)
        assert matches(post(author="who"), q)
        assert matches(post(author="@WHO"), q)
        assert not matches(post(author="WHO2"), q)

    def test_any_field_qualifies(self):
        q = StreamQuery(terms=("nothing",), users=("WHO",))
        assert matches(post(author="WHO", text="unrelated"), q)


class TestSocialPostJson:
    def test_parses_rfc3339(self):
        p = SocialPost.from_json({"id": 5, "created_at": "2014-11-07T12:00:00Z",
                                  "text": "t", "urls": []})
        assert p.id == "5"
        assert p.created_at == T0

    def test_bad_created_at(self):
        with pytest.raises(InjectorError):
            SocialPost.from_json({"id": "1", "created_at": "sometime", "text": ""})
        with pytest.raises(InjectorError):
            SocialPost.from_json({"id": "1", "text": "no timestamp"})


class TestResolveRedirects:
    def test_chain_followed(self, fixture_server):
        final = fixture_server.add("127.0.0.2", "/long-form-article", "body")
        mid = fixture_server.add_redirect("127.0.0.2", "/mid", final)
        short = fixture_server.add_redirect("127.0.0.2", "/short", mid, status=301)
        result = resolve_redirects(short)
        assert result.final_url == final
        assert result.chain == (short, mid, final)
        assert result.resolved and not result.loop

    def test_loop_flagged(self, fixture_server):
        a = fixture_server.url("127.0.0.2", "/loop-a")
        b = fixture_server.url("127.0.0.2", "/loop-b")
        fixture_server.add_redirect("127.0.0.2", "/loop-a", b)
        fixture_server.add_redirect("127.0.0.2", "/loop-b", a)
        result = resolve_redirects(a)
        assert result.loop is True
        assert result.final_url in (a, b)

    def test_hop_cap(self, fixture_server):
        urls = [fixture_server.url("127.0.0.2", f"/hop{i}") for i in range(6)]
        for i in range(5):
            fixture_server.add_redirect("127.0.0.2", f"/hop{i}", urls[i + 1])
        fixture_server.add("127.0.0.2", "/hop5", "end")
        result = resolve_redirects(urls[0], max_hops=3)
        assert len(result.chain) == 4
        assert not result.loop

    def test_network_failure_unresolved(self):
        result = resolve_redirects("http://127.0.0.9:1/nowhere", timeout=0.3)
        assert result.resolved is False
        assert result.final_url == "http://127.0.0.9:1/nowhere"


class TestRewriteSocialUrl:
    def test_twitter_status(self):
        assert rewrite_social_url("https://twitter.com/who/status/12345") == \
            "https://api.twitter.com/2/tweets/12345"
        assert rewrite_social_url("https://x.com/who/statuses/9") == \
            "https://api.twitter.com/2/tweets/9"
        assert rewrite_social_url("https://mobile.twitter.com/who/status/7") == \
            "https://api.twitter.com/2/tweets/7"

    def test_non_status_paths_ignored(self):
        assert rewrite_social_url("https://twitter.com/who") is None
        assert rewrite_social_url("http://news.example/status/1") is None


def write_replay(path, posts):
    with open(path, "w", encoding="utf-8") as fp:
        for p in posts:
            fp.write(json.dumps(p.to_json()) + "\n")


def run_replay(path, queries, frontier, speed=float("inf"), post_sink=None):
    injector = ReplayInjector(str(path), queries, frontier.inject,
                              post_sink=post_sink, speed=speed)
    injector.start()
    injector.join(timeout=30.0)
    injector.stop()
    return injector


class TestReplayInjector:
    def test_matching_posts_injected(self, tmp_path):
        posts = [
            post(text="ebola outbreak news", urls=["http://a.example/1"],
                 post_id="m1", created=T0),
            post(text="cooking tips", urls=["http://a.example/2"],
                 post_id="d1", created=T0 + timedelta(minutes=1)),
            post(text="more ebola coverage", urls=["http://a.example/3"],
                 post_id="m2", created=T0 + timedelta(minutes=2)),
        ]
        path = tmp_path / "posts.ndjson"
        write_replay(path, posts)
        frontier = Frontier(politeness_delay_ms=0)
        stored = []
        injector = run_replay(path, [StreamQuery(terms=("ebola",))], frontier,
                              post_sink=stored.append)
        assert injector.matched_count == 2
        assert injector.injected_count == 2
        assert frontier.entry("http://a.example/1").score == 1.0
        assert frontier.entry("http://a.example/2") is None
        assert [p.id for p in stored] == ["m1", "m2"]

    def test_known_urls_not_reinjected(self, tmp_path):
        path = tmp_path / "posts.ndjson"
        write_replay(path, [post(text="ebola", urls=["http://a.example/1"])])
        frontier = Frontier(politeness_delay_ms=0)
        frontier.inject("http://a.example/1", now=0.0)
        injector = run_replay(path, [StreamQuery(terms=("ebola",))], frontier)
        assert injector.matched_count == 1
        assert injector.injected_count == 0

    def test_platform_urls_also_injected_as_api_form(self, tmp_path):
        path = tmp_path / "posts.ndjson"
        write_replay(path, [post(text="ebola", urls=["https://twitter.com/who/status/42"])])
        frontier = Frontier(politeness_delay_ms=0)
        injector = run_replay(path, [StreamQuery(terms=("ebola",))], frontier)
        assert injector.injected_count == 2
        assert frontier.entry("https://api.twitter.com/2/tweets/42") is not None

    def test_speed_does_not_change_decisions(self, tmp_path):
        posts = [post(text="ebola news", urls=[f"http://a.example/{i}"],
                      post_id=f"p{i}", created=T0 + timedelta(milliseconds=40 * i))
                 for i in range(5)]
        path = tmp_path / "posts.ndjson"
        write_replay(path, posts)

        outcomes = {}
        for speed in (float("inf"), 10.0):
            frontier = Frontier(politeness_delay_ms=0)
            injector = run_replay(path, [StreamQuery(terms=("ebola",))], frontier,
                                  speed=speed)
            outcomes[speed] = (injector.matched_count, injector.injected_count,
                               sorted(e.url for e in frontier.top_queued(10)))
        assert outcomes[float("inf")] == outcomes[10.0]

    def test_finite_speed_preserves_spacing(self, tmp_path):
        posts = [post(text="ebola", urls=[f"http://a.example/{i}"], post_id=f"p{i}",
                      created=T0 + timedelta(seconds=i))
                 for i in range(3)]
        path = tmp_path / "posts.ndjson"
        write_replay(path, posts)
        frontier = Frontier(politeness_delay_ms=0)
        start = time.monotonic()
        run_replay(path, [StreamQuery(terms=("ebola",))], frontier, speed=10.0)
        elapsed = time.monotonic() - start
        # two 1s gaps replayed at 10x come to about 0.2s
        assert 0.15 <= elapsed < 1.0

    def test_bad_record_fails_injector(self, tmp_path):
        path = tmp_path / "posts.ndjson"
        path.write_text('{"id": "1", "created_at": "not a date", "text": ""}\n')
        frontier = Frontier(politeness_delay_ms=0)
        injector = run_replay(path, [StreamQuery(terms=("x",))], frontier)
        assert injector.status == "failed"
        assert "bad post record" in injector.diagnostic

    def test_query_update_swaps_atomically(self, tmp_path):
        path = tmp_path / "posts.ndjson"
        write_replay(path, [post(text="ebola", urls=["http://a.example/1"])])
        injector = ReplayInjector(str(path), [StreamQuery(terms=("x",))],
                                  Frontier(politeness_delay_ms=0).inject)
        injector.update_queries([StreamQuery(terms=("y",))])
        assert injector.queries() == [StreamQuery(terms=("y",))]
        with pytest.raises(InjectorError):
            injector.update_queries([])
        injector.start()
        injector.join(10.0)
        injector.stop()
        with pytest.raises(InjectorError):
            injector.update_queries([StreamQuery(terms=("z",))])

    def test_needs_queries(self, tmp_path):
        with pytest.raises(InjectorError):
            ReplayInjector(str(tmp_path / "x.ndjson"), [],
                           Frontier(politeness_delay_ms=0).inject)


RSS_FEED = """<?xml version="1.0"?>
<rss version="2.0"><channel><title>wire</title>
<item><title>ebola situation update</title>
  <link>http://wire.example/ebola-report</link>
  <guid>wire-1</guid>
  <pubDate>Fri, 07 Nov 2014 10:00:00 GMT</pubDate>
  <description>field summary</description></item>
<item><title>sports recap</title>
  <link>http://wire.example/sports</link>
  <guid>wire-2</guid>
  <pubDate>Fri, 07 Nov 2014 11:00:00 GMT</pubDate>
  <description>scores</description></item>
</channel></rss>"""


class TestRssInjector:
    def test_poll_matches_and_dedupes(self, fixture_server):
        feed_url = fixture_server.add("127.0.0.4", "/feed.xml", RSS_FEED,
                                      content_type="application/rss+xml")
        frontier = Frontier(politeness_delay_ms=0)
        injector = RssInjector([feed_url], [StreamQuery(terms=("ebola",))],
                               frontier.inject, max_polls=1)
        assert injector.poll_once() == 1
        assert frontier.entry("http://wire.example/ebola-report") is not None
        assert frontier.entry("http://wire.example/sports") is None
        # a second poll sees only known guids
        assert injector.poll_once() == 0

    def test_injection_source_labeled_rss(self, fixture_server):
        feed_url = fixture_server.add("127.0.0.4", "/feed.xml", RSS_FEED,
                                      content_type="application/rss+xml")
        frontier = Frontier(politeness_delay_ms=0)
        RssInjector([feed_url], [StreamQuery(terms=("ebola",))],
                    frontier.inject).poll_once()
        assert frontier.entry("http://wire.example/ebola-report").source == "rss_injection"

    def test_unreachable_feed_skipped(self):
        frontier = Frontier(politeness_delay_ms=0)
        injector = RssInjector(["http://127.0.0.9:1/feed.xml"],
                               [StreamQuery(terms=("x",))], frontier.inject)
        assert injector.poll_once() == 0
