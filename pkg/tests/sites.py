"""Small deterministic fixture sites shared by the engine and service tests."""

import json

HOST = "127.0.0.2"

SEED_PATH = "/2014/11/01/field-report"
CHILD_PATHS = {
    "update": "/2014/11/02/outbreak-update",
    "vaccine": "/2014/11/03/vaccine-news",
    "almanac": "/weather/almanac",
    "russian": "/2014/11/04/svodka",
}

TOPICAL_PROSE = (
    "Health officials confirmed new ebola cases in the western district as "
    "the outbreak response entered a seventh week. Vaccine shipments reached "
    "regional clinics while ministry teams traced contacts across the border "
    "region. Aid workers reported that treatment centers remain crowded and "
    "that community outreach has lowered transmission in two counties."
)

OFFTOPIC_PROSE = (
    "The county almanac lists first frost dates and pumpkin weights from the "
    "autumn fair. Growers compared rainfall charts over cider and discussed "
    "ribbon winners from the livestock hall. A long table of seed catalog "
    "prices closes the print edition along with notes on canning supplies "
    "and a schedule of winter market weekends in the valley towns."
)

RUSSIAN_PROSE = (
    "Министерство здравоохранения сообщило о новых случаях заболевания в "
    "западном районе страны. Врачи продолжают отслеживать контакты и "
    "разворачивают дополнительные пункты вакцинации. Местные власти просят "
    "жителей соблюдать рекомендации и обращаться в клиники при первых "
    "признаках болезни. Поставки вакцины прибыли в региональные центры."
)


def page(title, body_html):
    return ("<html><head><title>%s</title></head><body>%s</body></html>"
            % (title, body_html))


def link_block(href, anchor, prose):
    # one paragraph per link so each gets its own local context
    return '<p>%s <a href="%s">%s</a></p>' % (prose, href, anchor)


def build_site(server, *, twitter=False, missing=False):
    """Seed page plus four children on one host; returns path -> url."""
    urls = {}
    seed_body = "<p>%s</p>" % TOPICAL_PROSE
    seed_body += link_block(CHILD_PATHS["update"], "ebola outbreak response update",
                            TOPICAL_PROSE)
    seed_body += link_block(CHILD_PATHS["vaccine"], "vaccine shipment coverage",
                            TOPICAL_PROSE)
    seed_body += link_block(CHILD_PATHS["almanac"], "county fair almanac",
                            OFFTOPIC_PROSE)
    seed_body += link_block(CHILD_PATHS["russian"], "regional bulletin",
                            TOPICAL_PROSE)
    if twitter:
        seed_body += link_block("https://twitter.com/healthdesk/status/99001122",
                                "field dispatch thread", TOPICAL_PROSE)
    if missing:
        seed_body += link_block("/news/missing", "more ebola coverage",
                                TOPICAL_PROSE)
    urls["seed"] = server.add(HOST, SEED_PATH, page("Field report", seed_body))
    urls["update"] = server.add(HOST, CHILD_PATHS["update"],
                                page("Outbreak update", "<p>%s</p>" % TOPICAL_PROSE))
    urls["vaccine"] = server.add(HOST, CHILD_PATHS["vaccine"],
                                 page("Vaccine news", "<p>%s</p>" % TOPICAL_PROSE))
    urls["almanac"] = server.add(HOST, CHILD_PATHS["almanac"],
                                 page("Almanac", "<p>%s</p>" % OFFTOPIC_PROSE))
    urls["russian"] = server.add(HOST, CHILD_PATHS["russian"],
                                 page("Svodka", "<p>%s</p>" % RUSSIAN_PROSE))
    return urls


def build_chain_site(server, pages=8):
    """Seed linking to `pages` dated stories, all on one host."""
    body = "<p>%s</p>" % TOPICAL_PROSE
    for k in range(pages):
        path = "/2014/11/0%d/story-%d" % (k % 9 + 1, k)
        body += link_block(path, "ebola outbreak story %d" % k, TOPICAL_PROSE)
        server.add(HOST, path, page("Story %d" % k, "<p>%s</p>" % TOPICAL_PROSE))
    return server.add(HOST, SEED_PATH, page("Seed", body))


def write_replay(path, posts):
    with open(path, "w", encoding="utf-8") as fp:
        for p in posts:
            fp.write(json.dumps(p.to_json()) + "\n")
    return str(path)
