import type { BatchReport, CrawlStatus } from "./types.js";

export interface HostCount {
  host: string;
  count: number;
}

function compareRows(a: HostCount, b: HostCount): number {
  if (a.count !== b.count) return b.count - a.count;
  return a.host < b.host ? -1 : a.host > b.host ? 1 : 0;
}

/**
 * Aggregate per-host page counts across batch reports, most-fetched first.
 * Ties order by host name so the table is stable between refreshes.
 */
export function topSites(reports: BatchReport[], limit = 10): HostCount[] {
  const counts = new Map<string, number>();
  for (const report of reports) {
    for (const [host, n] of Object.entries(report.per_host_counts)) {
      counts.set(host, (counts.get(host) ?? 0) + n);
    }
  }
  const rows = [...counts.entries()].map(([host, count]) => ({ host, count }));
  rows.sort(compareRows);
  return rows.slice(0, limit);
}

export function fetchedTotal(reports: BatchReport[]): number {
  let total = 0;
  for (const r of reports) total += r.fetched_count;
  return total;
}

/**
 * Every fetched page lands in exactly one host bucket, so the table must
 * account for the same total the status endpoint reports.
 */
export function matchesStatusTotal(
  reports: BatchReport[],
  status: CrawlStatus,
): boolean {
  let counted = 0;
  for (const report of reports) {
    for (const n of Object.values(report.per_host_counts)) counted += n;
  }
  return counted === status.totals.fetched;
}
