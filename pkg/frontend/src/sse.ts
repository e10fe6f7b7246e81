import type { BatchReport } from "./types.js";
import type { FetchLike } from "./api.js";

export interface StreamHandlers {
  onReport: (report: BatchReport) => void;
  /** Called once when the server sends its terminal end event. */
  onEnd?: () => void;
  onRetry?: (attempt: number) => void;
}

export interface StreamOptions {
  fetchImpl?: FetchLike;
  retryDelayMs?: number;
  maxRetries?: number;
}

export interface ReportStream {
  close(): void;
  /** Settles when the stream ends, is closed, or runs out of retries. */
  done: Promise<void>;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/**
 * Consume the per-batch report event stream.
 *
 * Browsers ship EventSource, but it cannot run under node for tests, so the
 * stream is read through fetch instead. Reconnection resumes from the batch
 * after the last one delivered, and anything the server replays at or below
 * that cursor is dropped, so each batch reaches onReport exactly once.
 */
export function streamReports(
  urlFor: (fromBatch: number) => string,
  fromBatch: number,
  handlers: StreamHandlers,
  options: StreamOptions = {},
): ReportStream {
  const fetchImpl: FetchLike =
    options.fetchImpl ?? ((input, init) => fetch(input, init));
  const retryDelayMs = options.retryDelayMs ?? 500;
  const maxRetries = options.maxRetries ?? 20;

  let lastSeen = fromBatch - 1;
  let closed = false;
  let ended = false;
  let attempts = 0;
  let controller: AbortController | null = null;

  const handleFrame = (frame: string): void => {
    let event = "message";
    const dataLines: string[] = [];
    for (const rawLine of frame.split("\n")) {
      const line = rawLine.endsWith("\r") ? rawLine.slice(0, -1) : rawLine;
      if (line.startsWith("event:")) {
        event = line.slice(6).trim();
      } else if (line.startsWith("data:")) {
        dataLines.push(line.slice(5).replace(/^ /, ""));
      }
    }
    if (event === "end") {
      ended = true;
      return;
    }
    if (event !== "message" || dataLines.length === 0) return;
    const report = JSON.parse(dataLines.join("\n")) as BatchReport;
    if (typeof report.batch_number !== "number") return;
    if (report.batch_number <= lastSeen) return;
    lastSeen = report.batch_number;
    attempts = 0;
    handlers.onReport(report);
  };

  const readOnce = async (): Promise<void> => {
    controller = new AbortController();
    const response = await fetchImpl(urlFor(lastSeen + 1), {
      headers: { accept: "text/event-stream" },
      signal: controller.signal,
    });
    if (response.status !== 200 || !response.body) {
      throw new Error(`event stream rejected with status ${response.status}`);
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let cut: number;
      while ((cut = buffer.indexOf("\n\n")) >= 0) {
        const frame = buffer.slice(0, cut);
        buffer = buffer.slice(cut + 2);
        if (frame.trim()) handleFrame(frame);
        if (ended) {
          await reader.cancel().catch(() => undefined);
          return;
        }
      }
    }
  };

  const run = async (): Promise<void> => {
    while (!closed && !ended) {
      try {
        await readOnce();
        if (ended || closed) break;
        // server hung up without the end marker; resume from the cursor
        throw new Error("event stream closed early");
      } catch (err) {
        if (closed || ended) break;
        attempts += 1;
        if (attempts > maxRetries) throw err;
        handlers.onRetry?.(attempts);
        await sleep(retryDelayMs);
      }
    }
    controller?.abort();
    if (ended) handlers.onEnd?.();
  };

  return {
    done: run(),
    close() {
      closed = true;
      controller?.abort();
    },
  };
}
