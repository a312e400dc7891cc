"""Command-line entry point.

Subcommands:
  ingest  — parse a repository (via git) or a pre-dumped log into a snapshot
  serve   — load a snapshot and expose the HTTP API
  export  — emit the graph response for a parameter set, offline

Exit codes: 0 success, 1 input error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import GitStemError
from .ingest import run_git_log, run_git_tags
from .keywords import _load_stopwords
from .service import SnapshotStore, create_app, graph_payload, parse_view_params
from .snapshot import build_snapshot, dumps_canonical, load_snapshot, save_snapshot, snapshot_to_dict
from .views import derive_view

DEFAULT_PORT = 8787


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gitstem")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="build a snapshot from a repo or log dump")
    src = ingest.add_mutually_exclusive_group(required=True)
    src.add_argument("--repo", help="path to a local git repository")
    src.add_argument("--log", help="path to a pre-dumped log file in the pinned format")
    ingest.add_argument("--pr", help="path to a PR dump (JSON array)")
    ingest.add_argument("--tags", help="path to a tag list file")
    ingest.add_argument("--main", default="master", help="main branch name")
    ingest.add_argument("--stopwords", help="path to a custom stop-word list")
    ingest.add_argument("--repo-id", default=None, help="snapshot repository id")
    ingest.add_argument("--out", required=True, help="snapshot output path")

    serve = sub.add_parser("serve", help="serve a snapshot over HTTP")
    serve.add_argument("--snapshot", required=True, action="append",
                       help="snapshot file (repeatable)")
    serve.add_argument("--port", type=int, default=DEFAULT_PORT)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--ui", help="directory with a built web client to serve at /")

    export = sub.add_parser("export", help="emit a graph response offline")
    export.add_argument("--snapshot", required=True)
    export.add_argument("--format", default="json", choices=["json"])
    export.add_argument("--threshold", type=float, default=None)
    export.add_argument("--weights", default=None,
                        help="author,date,type,file,message (five numbers)")
    export.add_argument("--csm", default=None, help="true|false")
    export.add_argument("--release-split", dest="release_split", default=None, help="true|false")
    export.add_argument("--non-conflict", dest="non_conflict", default=None, help="true|false")
    export.add_argument("--out", default=None, help="output path (stdout when omitted)")
    return parser


def _cmd_ingest(args) -> int:
    if args.repo:
        log_text = run_git_log(args.repo)
        tag_text = run_git_tags(args.repo)
        default_repo_id = Path(args.repo).resolve().name
    else:
        log_text = Path(args.log).read_text(encoding="utf-8")
        tag_text = None
        default_repo_id = Path(args.log).stem
    if args.tags:
        tag_text = Path(args.tags).read_text(encoding="utf-8")
    pr_entries = None
    if args.pr:
        pr_entries = json.loads(Path(args.pr).read_text(encoding="utf-8"))
    stop_words = _load_stopwords(args.stopwords) if args.stopwords else None
    snap = build_snapshot(
        repo_id=args.repo_id or default_repo_id,
        log_text=log_text,
        pr_entries=pr_entries,
        tag_text=tag_text,
        main_branch=args.main,
        stop_words=stop_words,
        created_at=0,
    )
    save_snapshot(snap, args.out)
    for warning in snap.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(
        f"ingested {snap.commit_count} commits, {len(snap.raw_stems)} stems -> {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    store = SnapshotStore()
    for path in args.snapshot:
        store.add(load_snapshot(path))
    app = create_app(store, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_export(args) -> int:
    snap = load_snapshot(args.snapshot)
    query: dict[str, str] = {}
    if args.threshold is not None:
        query["threshold"] = str(args.threshold)
    if args.csm is not None:
        query["csm"] = args.csm
    if args.release_split is not None:
        query["releaseSplit"] = args.release_split
    if args.non_conflict is not None:
        query["nonConflict"] = args.non_conflict
    if args.weights is not None:
        parts = args.weights.split(",")
        if len(parts) != 5:
            raise GitStemError("--weights takes five comma-separated numbers")
        for name, value in zip(("wAuthor", "wDate", "wType", "wFile", "wMessage"), parts):
            query[name] = value
    params = parse_view_params(query)
    view = derive_view(snap, params)
    text = dumps_canonical(graph_payload(view)) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "export":
            return _cmd_export(args)
        return 2
    except GitStemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
