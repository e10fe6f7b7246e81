"""Command line entry points.

    crawl run --spec spec.json --mode INT --batch-size 50 --replay posts.ndjson --out run/
    crawl export-warc --crawl-dir run/ --out pages.warc
    crawl report --crawl-dir run/
    crawl serve --port 8000 --base-dir crawls/

Exit codes: 0 on a clean run or stop, 1 when the crawl cannot start
(bad spec/config, unreachable seeds), 2 when a started crawl aborts.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys

from .engine import CrawlConfig, CrawlEngine, CrawlStartupError
from .storage import MetadataStore, export_metrics_csv
from .vectorize import CrawlSpecification

EXIT_OK = 0
EXIT_STARTUP = 1
EXIT_ABORT = 2


def _load_spec(path: str) -> CrawlSpecification:
    with open(path, encoding="utf-8") as fp:
        return CrawlSpecification.from_json(json.load(fp))


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        spec = _load_spec(args.spec)
        config_kwargs: dict = {}
        if args.config:
            with open(args.config, encoding="utf-8") as fp:
                config_kwargs.update(json.load(fp))
        if args.mode:
            config_kwargs["mode"] = args.mode
        if args.batch_size:
            config_kwargs["batch_size"] = args.batch_size
        if args.max_batches:
            config_kwargs["max_batches"] = args.max_batches
        if args.replay:
            config_kwargs["replay_file"] = args.replay
        if args.replay_speed:
            config_kwargs["replay_speed"] = (
                float("inf") if args.replay_speed == "inf" else float(args.replay_speed))
        if args.politeness_ms is not None:
            config_kwargs["politeness_delay_ms"] = args.politeness_ms
        config = CrawlConfig.from_json(config_kwargs)
        engine = CrawlEngine(spec, config, args.out)
        engine.start()
    except (CrawlStartupError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STARTUP

    stopping = []

    def _on_signal(signum, frame):
        if not stopping:
            stopping.append(True)
            print("\nstopping at next batch boundary...", file=sys.stderr)
            engine.stop()

    signal.signal(signal.SIGINT, _on_signal)
    signal.signal(signal.SIGTERM, _on_signal)

    engine.wait()
    summary = engine.stop()
    engine.close()
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK if summary.get("state") == "stopped" else EXIT_ABORT


def _cmd_export_warc(args: argparse.Namespace) -> int:
    from .storage import ContentStore
    from .warcexport import export_warc

    crawl_dir = args.crawl_dir
    meta_path = os.path.join(crawl_dir, "metadata.db")
    content_dir = os.path.join(crawl_dir, "content")
    if not os.path.exists(meta_path) or not os.path.isdir(content_dir):
        print(f"error: {crawl_dir!r} does not look like a crawl directory", file=sys.stderr)
        return EXIT_STARTUP
    meta = MetadataStore(meta_path)
    content = ContentStore(content_dir)
    crawl_id = meta.get_meta("crawl_id") or "unknown"
    digest = meta.get_meta("spec_digest") or ""
    try:
        count = export_warc(content, meta, args.out, crawl_id, digest,
                            gzip_records=args.gzip)
    except OSError as exc:
        print(f"error: export failed: {exc}", file=sys.stderr)
        return EXIT_ABORT
    print(f"wrote {count} records to {args.out}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    meta_path = os.path.join(args.crawl_dir, "metadata.db")
    if not os.path.exists(meta_path):
        print(f"error: no metadata at {meta_path!r}", file=sys.stderr)
        return EXIT_STARTUP
    meta = MetadataStore(meta_path)
    summary_raw = meta.get_meta("summary")
    if summary_raw:
        print(summary_raw)
    else:
        print("{}")
    if args.metrics_csv:
        rows = export_metrics_csv(meta, args.metrics_csv)
        print(f"wrote {rows} metric rows to {args.metrics_csv}", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(base_dir=args.base_dir, ui_dir=args.ui_dir,
                     max_active=args.max_active)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crawl", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one crawl to completion")
    run.add_argument("--spec", required=True, help="crawl spec JSON file")
    run.add_argument("--config", help="crawl config JSON file")
    run.add_argument("--mode", choices=["UN", "FO", "TB", "INT"])
    run.add_argument("--batch-size", type=int)
    run.add_argument("--max-batches", type=int)
    run.add_argument("--replay", help="NDJSON social stream to replay")
    run.add_argument("--replay-speed", help="replay speed factor, or 'inf'")
    run.add_argument("--politeness-ms", type=int)
    run.add_argument("--out", required=True, help="crawl output directory")
    run.set_defaults(func=_cmd_run)

    warc = sub.add_parser("export-warc", help="export a crawl directory to WARC")
    warc.add_argument("--crawl-dir", required=True)
    warc.add_argument("--out", required=True)
    warc.add_argument("--gzip", action="store_true", help="gzip each record")
    warc.set_defaults(func=_cmd_export_warc)

    report = sub.add_parser("report", help="print a finished crawl's summary")
    report.add_argument("--crawl-dir", required=True)
    report.add_argument("--metrics-csv", help="also write per-batch metrics CSV here")
    report.set_defaults(func=_cmd_report)

    serve = sub.add_parser("serve", help="run the HTTP control service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--base-dir", default="crawls")
    serve.add_argument("--ui-dir", help="static dashboard directory to mount at /ui")
    serve.add_argument("--max-active", type=int, default=4)
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
