"""Sanity checks on the synthetic crawl world used by the integration tests.

The integration and experiment assertions only mean something if the world
has the separations it promises: topical pages score well against the seed
reference, the off-topic ring scores near zero, fresh pages are younger
than the stale bulk, and the replayed posts point into the fresh cluster.
"""

import json
from datetime import timedelta

import pytest

from freshcrawl.fetch import FetchPolicy, fetch
from freshcrawl.freshness import default_trigger_phrases, estimate_creation_date
from freshcrawl.parse import parse
from freshcrawl.synthsite import FixtureServer, WorldSizes, build_world
from freshcrawl.vectorize import build_reference_vector, cosine_similarity, build_document_vector

POLICY = FetchPolicy(respect_robots=False, timeout_s=10.0)


@pytest.fixture(scope="module")
def world(experiment_world):
    return experiment_world


def fetch_doc(url):
    return parse(fetch(url, POLICY))


class TestShape:
    def test_group_sizes(self, world):
        sizes = {g: len(urls) for g, urls in world.groups.items()}
        assert sizes["seed"] == 3
        assert sizes["mid"] == 120
        assert sizes["ring"] == 60
        assert sizes["deep"] == 150
        assert sizes["fresh"] == 170
        assert sizes["foreign"] == 6
        assert len(world.all_urls()) == 509

    def test_urls_unique(self, world):
        urls = world.all_urls()
        assert len(urls) == len(set(urls))

    def test_spec_contents(self, world):
        assert world.spec["seed_urls"] == world.seed_urls
        assert world.spec["keywords"]
        assert world.spec["queries"]
        assert world.spec["language"] == "en"

    def test_deterministic_given_seed(self, world):
        from urllib.parse import urlsplit
        server = FixtureServer().start()
        try:
            again = build_world(server, seed=20250819, now=world.now)
            # ports are ephemeral; identity up to the port must be stable
            def shape(urls):
                return [(urlsplit(u).hostname, urlsplit(u).path) for u in urls]
            assert shape(again.posted_urls) == shape(world.posted_urls)
            assert [p["id"] for p in again.posts] == [p["id"] for p in world.posts]
            import re
            def scrub(text):
                return re.sub(r":\d+/", ":0/", text)
            assert [scrub(p["text"]) for p in again.posts] == \
                [scrub(p["text"]) for p in world.posts]
        finally:
            server.stop()


class TestLinkStructure:
    def test_seeds_link_into_mid(self, world):
        outlinks = set()
        for url in world.seed_urls:
            outlinks.update(fetch_doc(url).outlinks)
        mid = set(world.groups["mid"])
        assert len(outlinks & mid) >= 10

    def test_fresh_pages_not_linked_from_web(self, world):
        fresh = set(world.groups["fresh"])
        for group in ("seed", "mid", "ring", "deep"):
            for url in world.groups[group][:20]:
                assert not (set(fetch_doc(url).outlinks) & fresh)

    def test_posted_urls_point_at_fresh_cluster(self, world):
        fresh = set(world.groups["fresh"])
        aliases = set(world.redirect_aliases)
        for url in world.posted_urls:
            assert url in fresh or url in aliases

    def test_redirect_aliases_resolve_to_fresh(self, world):
        fresh = set(world.groups["fresh"])
        for alias, target in world.redirect_aliases.items():
            page = fetch(alias, POLICY)
            assert target in fresh
            assert page.final_url == target


@pytest.fixture(scope="module")
def reference(world):
    seed_texts = [fetch_doc(u).main_text for u in world.seed_urls]
    return build_reference_vector(seed_texts, world.spec["keywords"])


class TestRelevanceSeparation:

    def score(self, url, reference):
        doc = fetch_doc(url)
        return cosine_similarity(build_document_vector(doc.main_text), reference.vector)

    def test_mid_pages_topical(self, world, reference):
        scores = [self.score(u, reference) for u in world.groups["mid"][:15]]
        assert min(scores) > 0.3

    def test_ring_pages_off_topic(self, world, reference):
        scores = [self.score(u, reference) for u in world.groups["ring"][:15]]
        assert max(scores) < 0.05

    def test_fresh_pages_topical(self, world, reference):
        scores = [self.score(u, reference) for u in world.groups["fresh"][:15]]
        assert min(scores) > 0.3


class TestDatesAndPosts:
    def test_intended_dates_resolve(self, world):
        phrases = default_trigger_phrases()
        sample = (world.groups["mid"][:10] + world.groups["fresh"][:10]
                  + world.groups["deep"][:5])
        for url in sample:
            want = world.created[url]
            if want is None:
                continue
            page = fetch(url, POLICY)
            doc = parse(page)
            est = estimate_creation_date(
                url=doc.url, fetch_time=page.fetch_time, main_text=doc.main_text,
                time_elements=doc.time_elements, meta_dates=doc.meta_dates,
                trigger_phrases=phrases)
            assert est is not None, url
            assert est.creation_time == want, url

    def test_fresh_younger_than_deep(self, world):
        fresh_ages = [world.now - world.created[u] for u in world.groups["fresh"]
                      if world.created[u]]
        deep_ages = [world.now - world.created[u] for u in world.groups["deep"]
                     if world.created[u]]
        assert max(fresh_ages) < timedelta(days=8)
        assert min(deep_ages) > timedelta(days=60)

    def test_replay_file_sorted_and_parseable(self, world):
        with open(world.replay_path, encoding="utf-8") as fp:
            posts = [json.loads(line) for line in fp if line.strip()]
        assert len(posts) == len(world.posts)
        stamps = [p["created_at"] for p in posts]
        assert stamps == sorted(stamps)
        for p in posts:
            assert {"id", "author", "created_at", "text", "urls"} <= set(p)

    def test_matching_and_decoy_posts_present(self, world):
        kinds = {p["id"].rsplit("-", 1)[-1] for p in world.posts}
        assert "match" in kinds and "decoy" in kinds
