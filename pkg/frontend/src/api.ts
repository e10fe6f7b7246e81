import type {
  BatchReport,
  CrawlConfigJson,
  CrawlSpecJson,
  CrawlStatus,
  CrawlSummary,
  CreatedCrawl,
  FrontierTopRow,
  QueryAck,
  StreamQueryJson,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
    // FastAPI validation errors ride in under "detail"
    if (body && body.detail !== undefined) return JSON.stringify(body.detail);
  } catch {
    // non-JSON body, fall through
  }
  return `request failed with status ${response.status}`;
}

/**
 * Thin typed client for the control service. All dashboard state is
 * reconstructible through these calls; nothing lives only in the page.
 */
export class ApiClient {
  readonly baseUrl: string;
  readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    // wrap the global so browser fetch keeps its expected receiver
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    expect = 200,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (response.status !== expect) {
      throw new ApiError(response.status, await errorMessage(response));
    }
    return (await response.json()) as T;
  }

  createCrawl(
    spec: CrawlSpecJson,
    config: CrawlConfigJson,
  ): Promise<CreatedCrawl> {
    return this.request<CreatedCrawl>("POST", "/crawls", { spec, config }, 201);
  }

  status(crawlId: string): Promise<CrawlStatus> {
    return this.request<CrawlStatus>("GET", `/crawls/${crawlId}/status`);
  }

  metrics(crawlId: string, fromBatch = 0): Promise<BatchReport[]> {
    return this.request<BatchReport[]>(
      "GET",
      `/crawls/${crawlId}/metrics?from_batch=${fromBatch}`,
    );
  }

  frontierTop(crawlId: string, n = 10): Promise<FrontierTopRow[]> {
    return this.request<FrontierTopRow[]>(
      "GET",
      `/crawls/${crawlId}/frontier/top?n=${n}`,
    );
  }

  updateQueries(
    crawlId: string,
    queries: StreamQueryJson[],
  ): Promise<QueryAck> {
    return this.request<QueryAck>("POST", `/crawls/${crawlId}/queries`, {
      queries,
    });
  }

  stop(crawlId: string): Promise<CrawlSummary> {
    return this.request<CrawlSummary>("POST", `/crawls/${crawlId}/stop`);
  }

  eventsUrl(crawlId: string, fromBatch: number): string {
    return `${this.baseUrl}/crawls/${crawlId}/events?from_batch=${fromBatch}`;
  }
}
