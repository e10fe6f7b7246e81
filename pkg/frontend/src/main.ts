import { ApiClient } from "./api.js";
import { CrawlView } from "./app.js";
import { renderCrawl, renderWizard } from "./dom.js";
import { listField, submitWizard, validateDraft, emptyDraft, type WizardDraft } from "./wizard.js";

const api = new ApiClient("");
const wizardRoot = document.getElementById("wizard")!;
const crawlRoot = document.getElementById("crawl")!;

let view: CrawlView | null = null;
let logScale = false;
let draft: WizardDraft = emptyDraft();

function repaint(): void {
  if (!view) return;
  renderCrawl(crawlRoot, view, logScale, {
    onToggleLog: () => {
      logScale = !logScale;
      repaint();
    },
    onSteer: (terms, hashtags, users) => {
      void view?.steer.submit([
        {
          terms: listField(terms),
          hashtags: listField(hashtags),
          users: listField(users),
        },
      ]);
    },
    onStop: () => {
      void view?.stop().catch((err: unknown) => {
        console.error(err);
      });
    },
  });
}

async function openCrawl(crawlId: string): Promise<void> {
  view?.close();
  // the id rides in the hash so a hard refresh reattaches to the same crawl
  location.hash = `crawl=${crawlId}`;
  view = new CrawlView(api, crawlId, repaint);
  await view.init();
  const poll = setInterval(() => {
    if (!view || view.crawlId !== crawlId) {
      clearInterval(poll);
      return;
    }
    void view.refreshStatus().catch(() => undefined);
    void view.refreshFrontier().catch(() => undefined);
    if (view.finished) clearInterval(poll);
  }, 1000);
}

function paintWizard(errors: string[] = []): void {
  renderWizard(wizardRoot, draft, errors, (next) => {
    draft = next;
    const problems = validateDraft(draft);
    if (problems.length) {
      paintWizard(problems);
      return;
    }
    submitWizard(api, draft)
      .then((created) => {
        paintWizard();
        return openCrawl(created.crawl_id);
      })
      .catch((err: unknown) => {
        paintWizard([err instanceof Error ? err.message : String(err)]);
      });
  });
}

paintWizard();
const match = /crawl=([\w-]+)/.exec(location.hash);
if (match && match[1]) {
  void openCrawl(match[1]).catch((err: unknown) => {
    console.error(err);
  });
}
