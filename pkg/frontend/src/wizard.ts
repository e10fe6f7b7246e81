import { ApiClient } from "./api.js";
import type {
  CrawlConfigJson,
  CrawlMode,
  CrawlSpecJson,
  CreatedCrawl,
  StreamQueryJson,
} from "./types.js";

/** Raw form state; every field is a string straight out of an input. */
export interface WizardDraft {
  mode: CrawlMode;
  seedUrls: string;
  keywords: string;
  language: string;
  queryTerms: string;
  queryHashtags: string;
  queryUsers: string;
  replayFile: string;
  replaySpeed: string;
  batchSize: string;
  politenessMs: string;
  maxBatches: string;
}

export function emptyDraft(): WizardDraft {
  return {
    mode: "FO",
    seedUrls: "",
    keywords: "",
    language: "en",
    queryTerms: "",
    queryHashtags: "",
    queryUsers: "",
    replayFile: "",
    replaySpeed: "inf",
    batchSize: "",
    politenessMs: "",
    maxBatches: "",
  };
}

/** Split a textarea/input on commas and newlines, dropping blanks. */
export function listField(raw: string): string[] {
  return raw
    .split(/[\n,]/)
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

function numberField(raw: string, label: string, errors: string[]): number | undefined {
  const trimmed = raw.trim();
  if (!trimmed) return undefined;
  const value = Number(trimmed);
  if (!Number.isFinite(value) || value < 0) {
    errors.push(`${label} must be a non-negative number`);
    return undefined;
  }
  return value;
}

const INJECTED_MODES: CrawlMode[] = ["TB", "INT"];

export function validateDraft(draft: WizardDraft): string[] {
  const errors: string[] = [];
  const seeds = listField(draft.seedUrls);
  const keywords = listField(draft.keywords);
  const hasQuery =
    listField(draft.queryTerms).length > 0 ||
    listField(draft.queryHashtags).length > 0 ||
    listField(draft.queryUsers).length > 0;
  const injected = INJECTED_MODES.includes(draft.mode);

  if (draft.mode !== "TB" && seeds.length === 0) {
    errors.push(`${draft.mode} crawls need at least one seed URL`);
  }
  for (const seed of seeds) {
    if (!/^https?:\/\//.test(seed)) {
      errors.push(`seed URL must be http(s): ${seed}`);
    }
  }
  if (keywords.length === 0 && draft.mode !== "UN") {
    errors.push("focused modes need topic keywords to score pages against");
  }
  if (injected) {
    if (!draft.replayFile.trim()) {
      errors.push(`${draft.mode} crawls need a replay file of posts to inject`);
    }
    if (!hasQuery) {
      errors.push(`${draft.mode} crawls need at least one stream query`);
    }
  } else if (draft.replayFile.trim()) {
    errors.push(`${draft.mode} crawls do not take a replay file`);
  }
  if (draft.replaySpeed.trim() && draft.replaySpeed.trim() !== "inf") {
    const speed = Number(draft.replaySpeed.trim());
    if (!Number.isFinite(speed) || speed <= 0) {
      errors.push('replay speed must be a positive number or "inf"');
    }
  }
  numberField(draft.batchSize, "batch size", errors);
  numberField(draft.politenessMs, "politeness delay", errors);
  numberField(draft.maxBatches, "max batches", errors);
  return errors;
}

export interface Submission {
  spec: CrawlSpecJson;
  config: CrawlConfigJson;
}

export function buildSubmission(draft: WizardDraft): Submission {
  const queries: StreamQueryJson[] = [];
  const terms = listField(draft.queryTerms);
  const hashtags = listField(draft.queryHashtags);
  const users = listField(draft.queryUsers);
  if (terms.length || hashtags.length || users.length) {
    queries.push({ terms, hashtags, users });
  }
  const spec: CrawlSpecJson = {
    seed_urls: listField(draft.seedUrls),
    keywords: listField(draft.keywords),
    language: draft.language.trim() || "en",
    queries,
  };
  const config: CrawlConfigJson = { mode: draft.mode };
  if (INJECTED_MODES.includes(draft.mode)) {
    config.replay_file = draft.replayFile.trim();
    const speed = draft.replaySpeed.trim();
    if (speed) config.replay_speed = speed === "inf" ? "inf" : Number(speed);
  }
  const errors: string[] = [];
  const batchSize = numberField(draft.batchSize, "batch size", errors);
  if (batchSize !== undefined) config.batch_size = batchSize;
  const politeness = numberField(draft.politenessMs, "politeness", errors);
  if (politeness !== undefined) config.politeness_delay_ms = politeness;
  const maxBatches = numberField(draft.maxBatches, "max batches", errors);
  if (maxBatches !== undefined) config.max_batches = maxBatches;
  return { spec, config };
}

/** Validate, then create the crawl. Callers surface thrown ApiError messages. */
export async function submitWizard(
  api: ApiClient,
  draft: WizardDraft,
): Promise<CreatedCrawl> {
  const errors = validateDraft(draft);
  if (errors.length) {
    throw new Error(errors.join("; "));
  }
  const { spec, config } = buildSubmission(draft);
  return api.createCrawl(spec, config);
}
