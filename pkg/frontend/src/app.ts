import { ApiClient } from "./api.js";
import { streamReports, type ReportStream, type StreamOptions } from "./sse.js";
import { SteerController } from "./steer.js";
import { topSites, type HostCount } from "./topsites.js";
import type {
  BatchReport,
  CrawlStatus,
  CrawlSummary,
  FrontierTopRow,
} from "./types.js";

type StreamFactory = typeof streamReports;

/**
 * View model for one crawl. Everything it holds is rebuilt from the service
 * on init, so a hard refresh loses nothing: prior batches come back through
 * the metrics endpoint and the event stream resumes after the last of them.
 */
export class CrawlView {
  reports: BatchReport[] = [];
  status: CrawlStatus | null = null;
  frontierRows: FrontierTopRow[] = [];
  summary: CrawlSummary | null = null;
  finished = false;
  streamError: string | null = null;
  readonly steer: SteerController;

  private stream: ReportStream | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly crawlId: string,
    private readonly onChange: () => void = () => undefined,
    private readonly streamFactory: StreamFactory = streamReports,
    private readonly streamOptions: StreamOptions = {},
  ) {
    this.steer = new SteerController(api, crawlId, undefined, () =>
      this.onChange(),
    );
  }

  async init(): Promise<void> {
    this.status = await this.api.status(this.crawlId);
    this.steer.noteStatus(this.status);
    this.reports = await this.api.metrics(this.crawlId);
    this.onChange();
    const lastBatch = this.reports.length
      ? this.reports[this.reports.length - 1]!.batch_number
      : 0;
    this.stream = this.streamFactory(
      (fromBatch) => this.api.eventsUrl(this.crawlId, fromBatch),
      lastBatch + 1,
      {
        onReport: (report) => this.acceptReport(report),
        onEnd: () => {
          this.finished = true;
          this.onChange();
        },
      },
      { fetchImpl: this.api.fetchImpl, ...this.streamOptions },
    );
    this.stream.done.catch((err: unknown) => {
      this.streamError = err instanceof Error ? err.message : String(err);
      this.onChange();
    });
  }

  private acceptReport(report: BatchReport): void {
    const last = this.reports.length
      ? this.reports[this.reports.length - 1]!.batch_number
      : 0;
    if (report.batch_number <= last) return;
    this.reports.push(report);
    this.onChange();
  }

  get topSiteRows(): HostCount[] {
    return topSites(this.reports);
  }

  async refreshStatus(): Promise<CrawlStatus> {
    this.status = await this.api.status(this.crawlId);
    this.onChange();
    return this.status;
  }

  async refreshFrontier(n = 10): Promise<FrontierTopRow[]> {
    this.frontierRows = await this.api.frontierTop(this.crawlId, n);
    this.onChange();
    return this.frontierRows;
  }

  async stop(): Promise<CrawlSummary> {
    this.summary = await this.api.stop(this.crawlId);
    this.onChange();
    return this.summary;
  }

  close(): void {
    this.stream?.close();
    this.stream = null;
  }
}
