/** Wire types for the crawl control service (JSON over HTTP + SSE). */

export type CrawlMode = "UN" | "FO" | "TB" | "INT";

export type CrawlState =
  | "starting"
  | "running"
  | "stopping"
  | "stopped"
  | "failed";

export interface StreamQueryJson {
  terms: string[];
  hashtags: string[];
  users: string[];
}

export interface CrawlSpecJson {
  seed_urls: string[];
  keywords: string[];
  language: string;
  queries: StreamQueryJson[];
}

/** Subset of engine settings the wizard exposes; unknown keys are rejected server side. */
export interface CrawlConfigJson {
  mode: CrawlMode;
  batch_size?: number;
  max_batches?: number;
  politeness_delay_ms?: number;
  idle_timeout_s?: number;
  replay_file?: string;
  /** "inf" replays everything immediately. */
  replay_speed?: number | "inf";
  rss_feeds?: string[];
  uniform_priority?: number;
}

export interface CreatedCrawl {
  crawl_id: string;
  state: CrawlState;
  mode: CrawlMode;
}

/** One per-batch report, also the payload of each SSE event. */
export interface BatchReport {
  batch_number: number;
  fetched_count: number;
  failed_count: number;
  avg_relevance: number | null;
  avg_freshness_hours: number | null;
  per_host_counts: Record<string, number>;
}

export interface InjectorStatus {
  kind: string;
  status: string;
  diagnostic: string | null;
}

export interface CrawlStatus {
  crawl_id: string;
  state: CrawlState;
  mode: CrawlMode;
  current_batch: number;
  frontier_size: number;
  frontier_counts: Record<string, number>;
  queued_max_score: number | null;
  totals: {
    fetched: number;
    failed: number;
    stored_posts: number;
    injected_urls: number;
  };
  injectors: InjectorStatus[];
}

export interface FrontierTopRow {
  url: string;
  score: number;
  source: string;
}

export interface QueryAck {
  acknowledged: boolean;
  active_queries: StreamQueryJson[];
}

export interface CrawlSummary {
  crawl_id: string;
  mode: CrawlMode;
  state: CrawlState;
  batches: number;
  total_fetched: number;
  total_failed: number;
  stored_posts: number;
  injected_urls: number;
  frontier: Record<string, number>;
  top_sites: [string, number][];
  started_at: string | null;
  finished_at: string | null;
  diagnostic: string | null;
}
