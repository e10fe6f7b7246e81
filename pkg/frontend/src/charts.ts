import type { BatchReport } from "./types.js";

export interface SeriesPoint {
  batch: number;
  value: number;
}

/**
 * Values are copied verbatim from the reports; the dashboard never averages
 * or otherwise recomputes what the crawler already aggregated.
 */
export function relevanceSeries(reports: BatchReport[]): SeriesPoint[] {
  const points: SeriesPoint[] = [];
  for (const r of reports) {
    if (r.avg_relevance === null) continue;
    points.push({ batch: r.batch_number, value: r.avg_relevance });
  }
  return points;
}

export function freshnessSeries(reports: BatchReport[]): SeriesPoint[] {
  const points: SeriesPoint[] = [];
  for (const r of reports) {
    if (r.avg_freshness_hours === null) continue;
    points.push({ batch: r.batch_number, value: r.avg_freshness_hours });
  }
  return points;
}

/**
 * Split a series where batch numbers stop being consecutive. A batch whose
 * average was null leaves a visible gap in the line rather than a zero.
 */
export function segments(points: SeriesPoint[]): SeriesPoint[][] {
  const out: SeriesPoint[][] = [];
  let current: SeriesPoint[] = [];
  let prev: number | null = null;
  for (const p of points) {
    if (prev !== null && p.batch !== prev + 1) {
      out.push(current);
      current = [];
    }
    current.push(p);
    prev = p.batch;
  }
  if (current.length) out.push(current);
  return out;
}

export interface ChartBox {
  width: number;
  height: number;
}

export function batchDomain(points: SeriesPoint[]): [number, number] {
  if (!points.length) return [0, 1];
  const first = points[0]!.batch;
  const last = points[points.length - 1]!.batch;
  return first === last ? [first - 0.5, first + 0.5] : [first, last];
}

export function valueDomain(
  points: SeriesPoint[],
  logScale = false,
): [number, number] {
  const values = points.map((p) => p.value).filter((v) => !logScale || v > 0);
  if (!values.length) return logScale ? [1, 10] : [0, 1];
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    // flat series: pad so the line sits mid-chart
    if (logScale) {
      lo = lo / 2;
      hi = hi * 2;
    } else {
      lo = lo - 0.5;
      hi = hi + 0.5;
    }
  }
  return [lo, hi];
}

export function xPosition(
  batch: number,
  domain: [number, number],
  width: number,
): number {
  const [lo, hi] = domain;
  const t = hi === lo ? 0.5 : (batch - lo) / (hi - lo);
  return t * width;
}

export function yPosition(
  value: number,
  domain: [number, number],
  height: number,
  logScale = false,
): number {
  const [lo, hi] = domain;
  let t: number;
  if (logScale) {
    const floor = Math.max(lo, Number.MIN_VALUE);
    const v = Math.max(value, floor);
    const span = Math.log(hi) - Math.log(floor);
    t = span === 0 ? 0.5 : (Math.log(v) - Math.log(floor)) / span;
  } else {
    t = hi === lo ? 0.5 : (value - lo) / (hi - lo);
  }
  // svg y axis points down
  return height - t * height;
}

/** One svg path string per contiguous segment of the series. */
export function seriesPaths(
  points: SeriesPoint[],
  box: ChartBox,
  logScale = false,
): string[] {
  const xDom = batchDomain(points);
  const yDom = valueDomain(points, logScale);
  return segments(points).map((segment) =>
    segment
      .map((p, i) => {
        const x = xPosition(p.batch, xDom, box.width).toFixed(2);
        const y = yPosition(p.value, yDom, box.height, logScale).toFixed(2);
        return `${i === 0 ? "M" : "L"}${x},${y}`;
      })
      .join(" "),
  );
}
