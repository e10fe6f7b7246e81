import { seriesPaths, freshnessSeries, relevanceSeries, type SeriesPoint } from "./charts.js";
import type { CrawlView } from "./app.js";
import type { WizardDraft } from "./wizard.js";

type Attrs = Record<string, string>;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Attrs = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

const SVG_NS = "http://www.w3.org/2000/svg";
const CHART_BOX = { width: 560, height: 150 };

function chartSvg(points: SeriesPoint[], logScale: boolean): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute(
    "viewBox",
    `-4 -4 ${CHART_BOX.width + 8} ${CHART_BOX.height + 8}`,
  );
  svg.classList.add("chart");
  for (const d of seriesPaths(points, CHART_BOX, logScale)) {
    const path = document.createElementNS(SVG_NS, "path");
    path.setAttribute("d", d);
    path.setAttribute("fill", "none");
    svg.append(path);
    // mark single-point segments that a stroke cannot show
    if (!d.includes("L")) {
      const [x, y] = d.slice(1).split(",");
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", x ?? "0");
      dot.setAttribute("cy", y ?? "0");
      dot.setAttribute("r", "2.5");
      svg.append(dot);
    }
  }
  return svg;
}

function chartPanel(
  title: string,
  points: SeriesPoint[],
  logScale: boolean,
  onToggleLog?: () => void,
): HTMLElement {
  const head = el("div", { class: "chart-head" }, [
    el("h3", {}, [title]),
    el("span", { class: "muted" }, [
      points.length ? `${points.length} points` : "no data yet",
    ]),
  ]);
  if (onToggleLog) {
    const toggle = el("label", { class: "log-toggle" }, ["log scale "]);
    const box = el("input", { type: "checkbox" });
    box.checked = logScale;
    box.addEventListener("change", onToggleLog);
    toggle.prepend(box);
    head.append(toggle);
  }
  return el("section", { class: "panel" }, [head, chartSvg(points, logScale)]);
}

function table(headers: string[], rows: (string | number)[][]): HTMLElement {
  const thead = el("tr", {}, headers.map((h) => el("th", {}, [h])));
  const body = rows.map((row) =>
    el("tr", {}, row.map((cell) => el("td", {}, [String(cell)]))),
  );
  return el("table", {}, [thead, ...body]);
}

export interface ViewCallbacks {
  onToggleLog: () => void;
  onSteer: (terms: string, hashtags: string, users: string) => void;
  onStop: () => void;
}

export function renderCrawl(
  root: HTMLElement,
  view: CrawlView,
  logScale: boolean,
  callbacks: ViewCallbacks,
): void {
  root.replaceChildren();
  const status = view.status;
  if (status) {
    const summaryBits = [
      `mode ${status.mode}`,
      `state ${view.finished ? "stopped" : status.state}`,
      `batch ${status.current_batch}`,
      `fetched ${status.totals.fetched}`,
      `failed ${status.totals.failed}`,
      `injected ${status.totals.injected_urls}`,
    ];
    root.append(
      el("p", { class: "status-line" }, [
        el("code", {}, [view.crawlId]),
        " " + summaryBits.join(" | "),
      ]),
    );
  }
  if (view.streamError) {
    root.append(el("p", { class: "error" }, [`stream: ${view.streamError}`]));
  }

  root.append(
    chartPanel("average relevance", relevanceSeries(view.reports), false),
    chartPanel(
      "average content age (hours)",
      freshnessSeries(view.reports),
      logScale,
      callbacks.onToggleLog,
    ),
  );

  const steer = view.steer.state;
  const steerPanel = el("section", { class: "panel" }, [
    el("h3", {}, ["live stream queries"]),
  ]);
  if (steer.disabledReason) {
    steerPanel.append(el("p", { class: "muted" }, [steer.disabledReason]));
  } else {
    const activeText = steer.active.length
      ? steer.active
          .map((q) =>
            [...q.terms, ...q.hashtags.map((h) => `#${h}`), ...q.users.map((u) => `@${u}`)].join(" "),
          )
          .join(" ; ")
      : "(none)";
    steerPanel.append(
      el("p", {}, ["active: ", el("code", {}, [activeText])]),
      el("p", { class: "muted" }, [
        steer.lastAckAt ? `last acknowledged ${steer.lastAckAt}` : "no edits yet",
      ]),
    );
    if (steer.conflictNote) {
      steerPanel.append(el("p", { class: "error" }, [steer.conflictNote]));
    }
    const terms = el("input", { placeholder: "terms, comma separated" });
    const hashtags = el("input", { placeholder: "hashtags" });
    const users = el("input", { placeholder: "users" });
    const send = el("button", {}, ["update queries"]);
    send.addEventListener("click", () =>
      callbacks.onSteer(terms.value, hashtags.value, users.value),
    );
    steerPanel.append(el("div", { class: "row" }, [terms, hashtags, users, send]));
  }
  if (steer.lastError) {
    steerPanel.append(el("p", { class: "error" }, [steer.lastError]));
  }
  root.append(steerPanel);

  root.append(
    el("section", { class: "panel" }, [
      el("h3", {}, ["top sites"]),
      table(
        ["host", "pages"],
        view.topSiteRows.map((row) => [row.host, row.count]),
      ),
    ]),
    el("section", { class: "panel" }, [
      el("h3", {}, ["best queued URLs"]),
      table(
        ["url", "score", "source"],
        view.frontierRows.map((row) => [row.url, row.score.toFixed(3), row.source]),
      ),
    ]),
  );

  const stop = el("button", { class: "danger" }, ["stop crawl"]);
  stop.addEventListener("click", callbacks.onStop);
  if (view.summary || view.finished) stop.setAttribute("disabled", "");
  root.append(el("div", { class: "row" }, [stop]));

  if (view.summary) {
    root.append(
      el("section", { class: "panel" }, [
        el("h3", {}, ["final summary"]),
        el("pre", {}, [JSON.stringify(view.summary, null, 2)]),
      ]),
    );
  }
}

interface WizardField {
  key: keyof WizardDraft;
  label: string;
  placeholder?: string;
}

const WIZARD_FIELDS: WizardField[] = [
  { key: "seedUrls", label: "seed URLs", placeholder: "one per line" },
  { key: "keywords", label: "topic keywords", placeholder: "comma separated" },
  { key: "language", label: "language" },
  { key: "queryTerms", label: "stream query terms" },
  { key: "queryHashtags", label: "stream query hashtags" },
  { key: "queryUsers", label: "stream query users" },
  { key: "replayFile", label: "replay file (server path)" },
  { key: "replaySpeed", label: "replay speed" },
  { key: "batchSize", label: "batch size" },
  { key: "politenessMs", label: "politeness delay (ms)" },
  { key: "maxBatches", label: "max batches" },
];

export function renderWizard(
  root: HTMLElement,
  draft: WizardDraft,
  errors: string[],
  onSubmit: (draft: WizardDraft) => void,
): void {
  root.replaceChildren();
  const mode = el("select", { id: "mode" });
  for (const m of ["FO", "UN", "TB", "INT"]) {
    const opt = el("option", { value: m }, [m]);
    if (m === draft.mode) opt.setAttribute("selected", "");
    mode.append(opt);
  }
  const fields = new Map<keyof WizardDraft, HTMLInputElement | HTMLTextAreaElement>();
  const form = el("div", { class: "panel wizard" }, [
    el("h3", {}, ["start a crawl"]),
    el("label", {}, ["mode ", mode]),
  ]);
  for (const field of WIZARD_FIELDS) {
    const multiline = field.key === "seedUrls" || field.key === "keywords";
    const input = multiline
      ? el("textarea", { rows: "2" })
      : el("input", { type: "text" });
    if (field.placeholder) input.setAttribute("placeholder", field.placeholder);
    input.value = draft[field.key];
    fields.set(field.key, input);
    form.append(el("label", {}, [field.label + " ", input]));
  }
  for (const err of errors) {
    form.append(el("p", { class: "error" }, [err]));
  }
  const submit = el("button", {}, ["create crawl"]);
  submit.addEventListener("click", () => {
    const next: WizardDraft = { ...draft, mode: mode.value as WizardDraft["mode"] };
    for (const [key, input] of fields) {
      (next as unknown as Record<string, string>)[key] = input.value;
    }
    onSubmit(next);
  });
  form.append(el("div", { class: "row" }, [submit]));
  root.append(form);
}
