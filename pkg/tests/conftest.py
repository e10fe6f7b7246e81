"""Shared fixtures: loopback fixture server, the comparison-run results,
and a terminal summary that prints one pass/fail line per acceptance
criterion after the run.
"""

from __future__ import annotations

import time

import pytest
from hypothesis import HealthCheck, settings

from freshcrawl.experiment import run_comparison
from freshcrawl.synthsite import FixtureServer, build_world

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

EXPERIMENT_SEED = 20250819

_acceptance_results: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(number, title): integrated acceptance check, one per criterion",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number = marker.kwargs.get("number", marker.args[0] if marker.args else 0)
    title = marker.kwargs.get("title", item.name)
    if report.when == "call":
        _acceptance_results[number] = (title, report.outcome, report.duration)
    elif report.when == "setup" and report.outcome != "passed":
        # a broken fixture must surface as a failed criterion, not silence
        _acceptance_results[number] = (title, report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance_results):
        title, outcome, duration = _acceptance_results[number]
        word = {"passed": "PASS"}.get(outcome, "FAIL")
        terminalreporter.write_line(
            f"criterion {number:>2}: {word}  {title}  ({duration:.2f}s)")


@pytest.fixture()
def fixture_server():
    server = FixtureServer()
    server.start()
    yield server
    server.stop()


@pytest.fixture(scope="session")
def experiment_world(tmp_path_factory):
    """The full synthetic world plus its replay file, built once per run."""
    server = FixtureServer()
    server.start()
    world = build_world(server, seed=EXPERIMENT_SEED)
    replay = tmp_path_factory.mktemp("replay") / "posts.ndjson"
    world.write_replay(str(replay))
    yield world
    server.stop()


@pytest.fixture(scope="session")
def experiment_results(experiment_world, tmp_path_factory):
    """All four comparison runs and their total wall time in seconds."""
    out_root = tmp_path_factory.mktemp("comparison")
    started = time.monotonic()
    results = run_comparison(experiment_world, str(out_root))
    wall_s = time.monotonic() - started
    return results, wall_s
