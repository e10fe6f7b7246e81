"""Four-configuration comparison runs over a synthetic world.

Runs the same crawl specification under UN, FO, TB and INT against a
FixtureServer world, collects per-batch relevance and the per-page
freshness distribution from each run's metadata store, and reduces them to
the numbers the comparison cares about: median freshness per configuration
and relevance trajectories over batches.
"""

from __future__ import annotations

import os
import statistics
from dataclasses import dataclass, field

from .engine import CrawlConfig, CrawlEngine
from .storage import MetadataStore
from .synthsite import SyntheticWorld
from .vectorize import CrawlSpecification

COMPARISON_MODES = ("TB", "INT", "FO", "UN")


@dataclass
class ModeResult:
    mode: str
    summary: dict
    batch_relevance: list[float | None] = field(default_factory=list)
    batch_freshness: list[float | None] = field(default_factory=list)
    freshness_hours: list[float] = field(default_factory=list)
    relevances: list[float] = field(default_factory=list)
    fetched_urls: set[str] = field(default_factory=set)
    injected_urls: set[str] = field(default_factory=set)

    @property
    def median_freshness_hours(self) -> float | None:
        if not self.freshness_hours:
            return None
        return statistics.median(self.freshness_hours)

    def mean_relevance_over(self, batches: list[float | None]) -> float | None:
        known = [r for r in batches if r is not None]
        if not known:
            return None
        return sum(known) / len(known)

    def quartile_batches(self) -> tuple[list[float | None], list[float | None]]:
        """First and last quarter of this run's batch relevance series."""
        n = len(self.batch_relevance)
        if n == 0:
            return [], []
        q = max(1, (n + 3) // 4)
        return self.batch_relevance[:q], self.batch_relevance[-q:]


def run_mode(world: SyntheticWorld, mode: str, out_dir: str, *,
             batch_size: int = 50, max_batches: int = 30,
             language: str | None = None, workers: int = 8,
             wait_s: float = 240.0) -> ModeResult:
    """Run one configuration over the world and collect its statistics."""
    if mode in ("TB", "INT") and not world.replay_path:
        raise ValueError("world has no replay file; call write_replay first")
    spec = CrawlSpecification.from_json(world.spec)
    config = CrawlConfig(
        mode=mode,
        batch_size=batch_size,
        max_batches=max_batches,
        politeness_delay_ms=0,
        workers=workers,
        idle_timeout_s=10.0,
        replay_file=world.replay_path if mode in ("TB", "INT") else None,
        replay_speed=float("inf"),
    )
    engine = CrawlEngine(spec, config, out_dir)
    engine.start()
    try:
        finished = engine.wait(wait_s)
        summary = engine.stop()
        if not finished:
            raise TimeoutError(f"{mode} run did not finish within {wait_s}s")
        result = ModeResult(mode=mode, summary=summary)
        for report in engine.reports():
            result.batch_relevance.append(report.avg_relevance)
            result.batch_freshness.append(report.avg_freshness_hours)
        eligible_language = language or spec.language
        for row in engine.meta.iter_pages(status="fetched"):
            result.fetched_urls.add(row.url)
            if row.language != eligible_language:
                continue
            if row.freshness_hours is not None:
                result.freshness_hours.append(row.freshness_hours)
            if row.relevance is not None:
                result.relevances.append(row.relevance)
        for entry in engine.frontier.state_dict()["entries"]:
            if entry["source"] in ("social_injection", "rss_injection"):
                result.injected_urls.add(entry["url"])
        return result
    finally:
        engine.close()


def run_comparison(world: SyntheticWorld, out_root: str, *,
                   batch_size: int = 50, max_batches: int = 30,
                   modes: tuple[str, ...] = COMPARISON_MODES) -> dict[str, ModeResult]:
    results: dict[str, ModeResult] = {}
    for mode in modes:
        out_dir = os.path.join(out_root, mode.lower())
        results[mode] = run_mode(world, mode, out_dir,
                                 batch_size=batch_size, max_batches=max_batches)
    return results


def comparison_table(results: dict[str, ModeResult]) -> str:
    """Plain-text summary table for script output."""
    lines = [f"{'mode':<6}{'fetched':>9}{'batches':>9}{'median fresh (h)':>18}"
             f"{'mean relevance':>16}"]
    for mode, result in results.items():
        med = result.median_freshness_hours
        rel = (sum(result.relevances) / len(result.relevances)
               if result.relevances else None)
        med_cell = "None" if med is None else str(round(med, 1))
        rel_cell = "None" if rel is None else str(round(rel, 3))
        lines.append(
            f"{mode:<6}{len(result.fetched_urls):>9}{result.summary['batches']:>9}"
            f"{med_cell:>18}{rel_cell:>16}"
        )
    return "\n".join(lines)
