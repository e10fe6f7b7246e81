import { ApiClient, ApiError } from "./api.js";
import type { CrawlStatus, StreamQueryJson } from "./types.js";

export interface SteerState {
  /** Active query set as last acknowledged by the service. */
  active: StreamQueryJson[];
  lastAckAt: string | null;
  inFlight: number;
  /** Non-null when steering is unavailable for this crawl (e.g. no injectors). */
  disabledReason: string | null;
  /** Set when an ack lands out of submit order; the newest ack still wins. */
  conflictNote: string | null;
  lastError: string | null;
}

/**
 * Drives the live query editor. Acks are applied in arrival order, so when
 * two edits race, whichever the service acknowledged last is what the panel
 * shows, and the overwritten edit is surfaced as a conflict note.
 */
export class SteerController {
  readonly state: SteerState = {
    active: [],
    lastAckAt: null,
    inFlight: 0,
    disabledReason: null,
    conflictNote: null,
    lastError: null,
  };

  private submitSeq = 0;
  private ackedSeq = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly crawlId: string,
    private readonly now: () => Date = () => new Date(),
    private readonly onChange?: (state: SteerState) => void,
  ) {}

  /** Reflect crawl status: modes without injectors cannot be steered. */
  noteStatus(status: CrawlStatus): void {
    if (status.injectors.length === 0) {
      this.state.disabledReason =
        `${status.mode} crawls run without stream injectors, ` +
        "so there is no live query set to edit";
    } else {
      this.state.disabledReason = null;
    }
    this.emit();
  }

  get enabled(): boolean {
    return this.state.disabledReason === null;
  }

  async submit(queries: StreamQueryJson[]): Promise<boolean> {
    const seq = ++this.submitSeq;
    this.state.inFlight += 1;
    this.emit();
    try {
      const ack = await this.api.updateQueries(this.crawlId, queries);
      this.state.active = ack.active_queries;
      this.state.lastAckAt = this.now().toISOString();
      this.state.lastError = null;
      this.state.conflictNote =
        seq < this.submitSeq || seq < this.ackedSeq
          ? "concurrent edits raced; showing the set the service acknowledged last"
          : null;
      this.ackedSeq = Math.max(this.ackedSeq, seq);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.state.disabledReason = err.message;
      } else {
        this.state.lastError = err instanceof Error ? err.message : String(err);
      }
      return false;
    } finally {
      this.state.inFlight -= 1;
      this.emit();
    }
  }

  private emit(): void {
    this.onChange?.(this.state);
  }
}
