import { describe, expect, it } from "vitest";
import type { ApiClient } from "../src/api";
import type { CrawlConfigJson, CrawlSpecJson } from "../src/types";
import {
  buildSubmission,
  emptyDraft,
  listField,
  submitWizard,
  validateDraft,
  type WizardDraft,
} from "../src/wizard";

function draftFor(overrides: Partial<WizardDraft>): WizardDraft {
  return { ...emptyDraft(), ...overrides };
}

const FOCUSED = draftFor({
  mode: "FO",
  seedUrls: "http://127.0.0.2/a\nhttp://127.0.0.3/b",
  keywords: "ebola, outbreak",
});

const REPLAY = draftFor({
  mode: "TB",
  keywords: "ebola",
  queryTerms: "ebola",
  replayFile: "/tmp/replay.ndjson",
  replaySpeed: "inf",
});

describe("listField", () => {
  it("splits on commas and newlines and trims blanks", () => {
    expect(listField("a, b\nc,\n ,d ")).toEqual(["a", "b", "c", "d"]);
    expect(listField("")).toEqual([]);
    expect(listField("  \n , ")).toEqual([]);
  });
});

describe("validateDraft", () => {
  it("accepts a well-formed focused crawl", () => {
    expect(validateDraft(FOCUSED)).toEqual([]);
  });

  it("requires seeds for outlink-following modes", () => {
    const errors = validateDraft(draftFor({ mode: "FO", keywords: "x" }));
    expect(errors.some((e) => e.includes("seed"))).toBe(true);
  });

  it("lets a replay-only crawl run without seeds", () => {
    expect(validateDraft(REPLAY)).toEqual([]);
  });

  it("requires replay file and a query for injected modes", () => {
    const errors = validateDraft(draftFor({ mode: "TB", keywords: "x" }));
    expect(errors.some((e) => e.includes("replay file"))).toBe(true);
    expect(errors.some((e) => e.includes("stream query"))).toBe(true);
  });

  it("rejects a replay file on modes that cannot take one", () => {
    const errors = validateDraft(
      draftFor({ ...FOCUSED, replayFile: "/tmp/replay.ndjson" }),
    );
    expect(errors.some((e) => e.includes("do not take a replay file"))).toBe(true);
  });

  it("rejects non-http seeds", () => {
    const errors = validateDraft(
      draftFor({ ...FOCUSED, seedUrls: "ftp://x/a" }),
    );
    expect(errors.some((e) => e.includes("http"))).toBe(true);
  });

  it("checks replay speed and numeric fields", () => {
    expect(
      validateDraft(draftFor({ ...REPLAY, replaySpeed: "fast" })),
    ).toHaveLength(1);
    expect(validateDraft(draftFor({ ...REPLAY, replaySpeed: "-2" }))).toHaveLength(1);
    expect(validateDraft(draftFor({ ...REPLAY, replaySpeed: "2.5" }))).toEqual([]);
    expect(
      validateDraft(draftFor({ ...FOCUSED, batchSize: "many" })),
    ).toHaveLength(1);
    expect(
      validateDraft(draftFor({ ...FOCUSED, politenessMs: "-5" })),
    ).toHaveLength(1);
  });
});

describe("buildSubmission", () => {
  it("shapes the crawl specification the service expects", () => {
    const { spec } = buildSubmission(
      draftFor({
        ...FOCUSED,
        language: " en ",
        queryTerms: "ebola, cholera",
        queryHashtags: "outbreak",
        queryUsers: "who",
      }),
    );
    const expected: CrawlSpecJson = {
      seed_urls: ["http://127.0.0.2/a", "http://127.0.0.3/b"],
      keywords: ["ebola", "outbreak"],
      language: "en",
      queries: [
        { terms: ["ebola", "cholera"], hashtags: ["outbreak"], users: ["who"] },
      ],
    };
    expect(spec).toEqual(expected);
  });

  it("omits the query block when all its fields are blank", () => {
    const { spec } = buildSubmission(FOCUSED);
    expect(spec.queries).toEqual([]);
  });

  it("only carries replay settings for injected modes", () => {
    const focused = buildSubmission(FOCUSED).config;
    expect(focused).toEqual({ mode: "FO" });

    const replay = buildSubmission(
      draftFor({ ...REPLAY, replaySpeed: "inf", batchSize: "5", politenessMs: "250" }),
    ).config;
    const expected: CrawlConfigJson = {
      mode: "TB",
      replay_file: "/tmp/replay.ndjson",
      replay_speed: "inf",
      batch_size: 5,
      politeness_delay_ms: 250,
    };
    expect(replay).toEqual(expected);
  });

  it("passes numeric replay speeds as numbers", () => {
    const { config } = buildSubmission(draftFor({ ...REPLAY, replaySpeed: "1.5" }));
    expect(config.replay_speed).toBe(1.5);
  });

  it("leaves optional numbers out when the fields are blank", () => {
    const { config } = buildSubmission(FOCUSED);
    expect("batch_size" in config).toBe(false);
    expect("max_batches" in config).toBe(false);
  });
});

describe("submitWizard", () => {
  it("validates before calling the service", async () => {
    const calls: unknown[] = [];
    const api = {
      createCrawl: async (...args: unknown[]) => {
        calls.push(args);
        return { crawl_id: "c1", state: "running", mode: "TB" };
      },
    } as unknown as ApiClient;
    await expect(
      submitWizard(api, draftFor({ mode: "FO", keywords: "x" })),
    ).rejects.toThrow(/seed/);
    expect(calls).toHaveLength(0);
  });

  it("creates the crawl from a valid draft", async () => {
    const calls: Array<[CrawlSpecJson, CrawlConfigJson]> = [];
    const api = {
      createCrawl: async (spec: CrawlSpecJson, config: CrawlConfigJson) => {
        calls.push([spec, config]);
        return { crawl_id: "c9", state: "starting", mode: config.mode };
      },
    } as unknown as ApiClient;
    const created = await submitWizard(api, REPLAY);
    expect(created.crawl_id).toBe("c9");
    expect(calls).toHaveLength(1);
    expect(calls[0]![1].mode).toBe("TB");
    expect(calls[0]![0].queries).toEqual([
      { terms: ["ebola"], hashtags: [], users: [] },
    ]);
  });
});
