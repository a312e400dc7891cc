"""HTTP facade over snapshots and derived views.

One process holds any number of immutable snapshots; every response is a
pure function of (snapshot, params).  Derived views and their serialized
graph payloads are kept in a bounded LRU keyed by the canonical param
serialization, so identical requests return byte-identical bodies.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import analytics
from .analytics import METRIC_CLOC, METRIC_COMMITS, Selection
from .errors import (
    DuplicateRepo,
    EmptySelection,
    GitStemError,
    InvalidParams,
    UnknownCluster,
    UnknownRepo,
    UnknownSelection,
)
from .snapshot import AnalysisSnapshot, build_snapshot, dumps_canonical
from .views import View, ViewParams, derive_view

DEFAULT_CACHE_SIZE = 64

_NOT_FOUND_ERRORS = (UnknownRepo, UnknownCluster, UnknownSelection)


class LruCache:
    def __init__(self, capacity: int = DEFAULT_CACHE_SIZE):
        self.capacity = capacity
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            if key not in self._data:
                return None
            self._data.move_to_end(key)
            return self._data[key]

    def put(self, key, value) -> None:
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            while len(self._data) > self.capacity:
                self._data.popitem(last=False)


class SnapshotStore:
    """Snapshots, selections and the derived-view cache."""

    def __init__(self, cache_size: int = DEFAULT_CACHE_SIZE):
        self._snapshots: dict[str, AnalysisSnapshot] = {}
        self._selections: dict[str, dict[str, Selection]] = {}
        self._counters: dict[str, int] = {}
        self._cache = LruCache(cache_size)
        self._lock = threading.Lock()

    def add(self, snap: AnalysisSnapshot) -> None:
        with self._lock:
            if snap.repo_id in self._snapshots:
                raise DuplicateRepo(f"repository {snap.repo_id!r} already ingested")
            self._snapshots[snap.repo_id] = snap
            self._selections[snap.repo_id] = {}
            self._counters[snap.repo_id] = 0

    def has(self, repo_id: str) -> bool:
        return repo_id in self._snapshots

    def get(self, repo_id: str) -> AnalysisSnapshot:
        snap = self._snapshots.get(repo_id)
        if snap is None:
            raise UnknownRepo(f"unknown repository {repo_id!r}")
        return snap

    def repo_ids(self) -> list[str]:
        return sorted(self._snapshots)

    def view(self, repo_id: str, params: ViewParams) -> tuple[View, bytes]:
        """Derived view + its serialized graph payload, cached."""
        snap = self.get(repo_id)
        key = (repo_id, params.cache_key())
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        view = derive_view(snap, params)
        body = (dumps_canonical(graph_payload(view)) + "\n").encode("utf-8")
        entry = (view, body)
        self._cache.put(key, entry)
        return entry

    def add_selection(self, repo_id: str, name: str, cluster_ids: list[str]) -> Selection:
        with self._lock:
            self.get(repo_id)
            self._counters[repo_id] += 1
            sel = Selection(
                id=f"s{self._counters[repo_id]}",
                name=name,
                cluster_ids=list(cluster_ids),
                captured_at=0,
            )
            self._selections[repo_id][sel.id] = sel
            return sel

    def selection(self, repo_id: str, selection_id: str) -> Selection:
        sel = self._selections.get(repo_id, {}).get(selection_id)
        if sel is None:
            raise UnknownSelection(f"unknown selection {selection_id!r}")
        return sel


# --- payload builders ---------------------------------------------------------


def graph_payload(view: View) -> dict:
    layout = view.layout
    return {
        "repoId": view.snapshot.repo_id,
        "csm": view.params.csm,
        "stems": [
            {
                "name": stem.name,
                "stemType": stem.stem_type,
                "headId": stem.nodes[-1].id,
                "nodeIds": [n.id for n in stem.nodes],
            }
            for stem in view.stems
        ],
        "clusters": [
            {
                "id": c.id,
                "stemName": c.stem_name,
                "members": list(c.members),
                "commitCount": c.commit_count,
                "cloc": c.cloc,
                "authors": sorted(c.authors),
                "types": {t: n for t, n in sorted(c.type_counts.items())},
                "fileCount": len(c.files),
                "dateRange": [c.date_min, c.date_max],
                "releaseTag": c.release_tag,
            }
            for c in view.clusters
        ],
        "csmNodes": [
            {
                "baseId": n.csm.base_id,
                "sourceIds": list(n.csm.source_ids),
                "coauthors": sorted(n.csm.coauthors),
                "commitTypes": {t: c for t, c in sorted(n.csm.commit_types.items())},
                "prRefs": list(n.csm.pr_refs),
            }
            for n in view.nodes_by_id.values()
            if n.csm is not None
        ],
        "csmEdges": [
            {
                "baseId": base,
                "sourceId": source,
                "baseBlock": layout.block_of_node.get(base),
                "sourceBlock": layout.block_of_node.get(source),
            }
            for base, source in view.csm_edges
        ],
        "layout": {
            "blocks": [
                {
                    "id": b.id,
                    "clusterId": b.cluster_id,
                    "stemName": b.stem_name,
                    "row": b.row,
                    "column": b.column,
                    "height": b.height,
                    "hasCsmBase": b.has_csm_base,
                    "releaseTag": b.release_tag,
                    "memberIds": list(b.member_ids),
                }
                for b in layout.blocks
            ],
            "rowAssignments": dict(sorted(layout.row_assignments.items())),
            "intraStemEdges": [[a, b] for a, b in layout.intra_stem_edges],
            "strips": {k: list(v) for k, v in sorted(layout.strips.items())},
            "releaseMarkers": [[col, version] for col, version in layout.release_markers],
            "columnCount": layout.column_count,
            "rowCount": layout.row_count,
        },
        "releases": [
            {"version": r.version, "commitId": r.commit_id, "date": r.date}
            for r in view.snapshot.releases
        ],
        "nodes": {
            n.id: {
                "stemName": n.stem_name,
                "commitCount": n.commit_count,
                "cloc": n.cloc,
                "date": n.date,
                "author": n.base.author_name,
                "isCsmBase": n.csm is not None,
            }
            for n in view.nodes_by_id.values()
        },
    }


def summary_payload(columns: list[analytics.SummaryColumn]) -> dict:
    return {
        "columns": [
            {
                "clusterId": col.cluster_id,
                "stemName": col.stem_name,
                "widthWeight": col.width_weight,
                "topAuthors": [[label, value] for label, value in col.top_authors],
                "topTypes": [[label, value] for label, value in col.top_types],
                "topFiles": [[label, value] for label, value in col.top_files],
                "topDirs": [[label, value] for label, value in col.top_dirs],
                "topKeywords": [[label, value] for label, value in col.top_keywords],
            }
            for col in columns
        ]
    }


def _icicle_payload(node: analytics.IcicleNode) -> dict:
    return {
        "name": node.name,
        "cloc": node.cloc,
        "commitCount": node.commit_count,
        "topAuthor": node.top_author,
        "children": [_icicle_payload(c) for c in node.children],
    }


def _row_payload(row: analytics.CommitRow) -> dict:
    return {
        "id": row.id,
        "author": row.author_name,
        "date": row.commit_date,
        "message": row.message,
        "commitType": row.commit_type,
        "cloc": row.cloc,
        "isCsmBase": row.is_csm_base,
        "sourceIds": row.source_ids,
        "sources": [_row_payload(s) for s in row.sources],
        "prRefs": row.pr_refs,
    }


def detail_payload(rows: list[analytics.CommitRow], icicle: analytics.IcicleNode) -> dict:
    return {"rows": [_row_payload(r) for r in rows], "icicle": _icicle_payload(icicle)}


def _diff_sets_payload(sets: analytics.DiffSets) -> dict:
    def entries(items):
        return [{"label": e.label, "a": e.value_a, "b": e.value_b} for e in items]

    return {
        "intersection": entries(sets.intersection),
        "onlyA": entries(sets.only_a),
        "onlyB": entries(sets.only_b),
    }


def diff_payload(diff: analytics.DiffResult) -> dict:
    return {
        "metric": diff.metric,
        "authors": _diff_sets_payload(diff.authors),
        "types": _diff_sets_payload(diff.types),
        "files": _diff_sets_payload(diff.files),
        "keywords": _diff_sets_payload(diff.keywords),
    }


def timeline_payload(snap: AnalysisSnapshot) -> dict:
    day_seconds = 86400
    counts: dict[int, int] = {}
    clocs: dict[int, int] = {}
    for rec in snap.commits:
        day = rec.commit_date // day_seconds * day_seconds
        counts[day] = counts.get(day, 0) + 1
        clocs[day] = clocs.get(day, 0) + rec.cloc
    series = []
    if counts:
        first = min(counts)
        last = max(counts)
        for day in range(first, last + day_seconds, day_seconds):
            series.append(
                {
                    "date": datetime.fromtimestamp(day, tz=timezone.utc).strftime("%Y-%m-%d"),
                    "ts": day,
                    "commitCount": counts.get(day, 0),
                    "cloc": clocs.get(day, 0),
                }
            )
    return {
        "days": series,
        "releases": [
            {"version": r.version, "date": r.date, "commitId": r.commit_id}
            for r in snap.releases
        ],
        "commits": [
            {"id": rec.id, "date": rec.commit_date, "cloc": rec.cloc}
            for rec in sorted(snap.commits, key=lambda r: (r.commit_date, r.id))
        ],
    }


# --- request parsing ----------------------------------------------------------


def _parse_bool(raw: str, name: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise InvalidParams(f"{name} must be a boolean, got {raw!r}")


def _parse_float(raw: str, name: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise InvalidParams(f"{name} must be a number, got {raw!r}") from None


def _parse_int(raw: str, name: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise InvalidParams(f"{name} must be an integer, got {raw!r}") from None


def parse_view_params(query) -> ViewParams:
    """Build ViewParams from query params or a JSON body dict; unknown names
    are ignored, repeated keyword-filter params stack."""
    params = ViewParams()
    changes: dict = {}
    mapping = {
        "csm": ("csm", _parse_bool),
        "threshold": ("threshold", _parse_float),
        "wAuthor": ("w_author", _parse_float),
        "wDate": ("w_date", _parse_float),
        "wType": ("w_type", _parse_float),
        "wFile": ("w_file", _parse_float),
        "wMessage": ("w_message", _parse_float),
        "releaseSplit": ("release_split", _parse_bool),
        "nonConflict": ("non_conflict", _parse_bool),
        "from": ("date_from", _parse_int),
        "to": ("date_to", _parse_int),
        "horizonDays": ("horizon_days", _parse_int),
    }
    for name, (attr, conv) in mapping.items():
        raw = query.get(name)
        if raw is not None and raw != "":
            changes[attr] = conv(str(raw), name)
    stem_types = query.get("stemTypes")
    if stem_types:
        changes["stem_types"] = tuple(sorted({s for s in str(stem_types).split(",") if s}))

    # keyword filters stack: repeat kwCriterion/kwText/kwMode to compose
    # (JSON bodies may carry arrays instead of repeated keys)
    def _many(name: str) -> list[str]:
        if hasattr(query, "getlist"):
            return [v for v in query.getlist(name)]
        value = query.get(name)
        if value in (None, ""):
            return []
        if isinstance(value, list):
            return [str(v) for v in value]
        return [str(value)]

    criteria = _many("kwCriterion")
    texts = _many("kwText")
    modes = _many("kwMode")
    if criteria or texts or modes:
        if len(criteria) != len(texts):
            raise InvalidParams("kwCriterion and kwText must be given together")
        if modes and len(modes) != len(texts):
            raise InvalidParams("kwMode must be given once per keyword filter")
        if not modes:
            modes = ["include"] * len(texts)
        changes["kw_filters"] = tuple(zip(criteria, texts, modes))
    params = params.replace(**changes)
    params.validate()
    return params


def _canonical_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=dumps_canonical(payload) + "\n",
        status_code=status_code,
        media_type="application/json",
    )


# --- app ----------------------------------------------------------------------


def create_app(store: SnapshotStore | None = None, ui_dir: str | None = None) -> FastAPI:
    store = store if store is not None else SnapshotStore()
    app = FastAPI(title="gitstem", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(GitStemError)
    async def _gitstem_error(request: Request, exc: GitStemError):
        if isinstance(exc, _NOT_FOUND_ERRORS):
            status = 404
        elif isinstance(exc, DuplicateRepo):
            status = 409
        else:
            status = 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    @app.get("/api/repos")
    def list_repos():
        return _canonical_response({"repoIds": store.repo_ids()})

    @app.post("/api/repos")
    async def ingest_repo(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or not body.get("repoId"):
            raise InvalidParams("repoId is required")
        repo_id = str(body["repoId"])
        if store.has(repo_id):
            raise DuplicateRepo(f"repository {repo_id!r} already ingested")
        log_text = body.get("logText")
        log_path = body.get("logPath")
        if (log_text is None) == (log_path is None):
            raise InvalidParams("exactly one of logText or logPath is required")
        if log_path is not None:
            try:
                log_text = Path(log_path).read_text(encoding="utf-8")
            except OSError as exc:
                raise InvalidParams(f"cannot read log file: {exc}") from None
        pr_entries = None
        if body.get("prPath"):
            import json as _json

            try:
                pr_entries = _json.loads(Path(body["prPath"]).read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                raise InvalidParams(f"cannot read PR dump: {exc}") from None
        tag_text = None
        if body.get("tagPath"):
            try:
                tag_text = Path(body["tagPath"]).read_text(encoding="utf-8")
            except OSError as exc:
                raise InvalidParams(f"cannot read tag list: {exc}") from None
        snap = build_snapshot(
            repo_id,
            log_text,
            pr_entries=pr_entries,
            tag_text=tag_text,
            main_branch=str(body.get("mainBranch") or "master"),
        )
        store.add(snap)
        return _canonical_response(
            {
                "repoId": repo_id,
                "commitCount": snap.commit_count,
                "stemCount": len(snap.raw_stems),
            },
            status_code=201,
        )

    @app.get("/api/repos/{repo_id}/graph")
    def graph(repo_id: str, request: Request):
        params = parse_view_params(request.query_params)
        _, body = store.view(repo_id, params)
        return Response(content=body, media_type="application/json")

    @app.get("/api/repos/{repo_id}/clusters/summary")
    def clusters_summary(repo_id: str, request: Request):
        params = parse_view_params(request.query_params)
        view, _ = store.view(repo_id, params)
        ids_raw = request.query_params.get("ids") or ""
        ids = [i for i in ids_raw.split(",") if i]
        if not ids:
            ids = [c.id for c in view.clusters]
        by_cloc = _parse_bool(request.query_params.get("byCloc", "false"), "byCloc")
        columns = analytics.grouped_summary(view, ids, by_cloc=by_cloc)
        return _canonical_response(summary_payload(columns))

    @app.get("/api/repos/{repo_id}/clusters/{cluster_id}/detail")
    def cluster_detail(repo_id: str, cluster_id: str, request: Request):
        params = parse_view_params(request.query_params)
        view, _ = store.view(repo_id, params)
        rows, icicle = analytics.cluster_detail(view, cluster_id)
        return _canonical_response(detail_payload(rows, icicle))

    @app.post("/api/repos/{repo_id}/selections")
    async def create_selection(repo_id: str, request: Request):
        body = await request.json()
        cluster_ids = body.get("clusterIds") or []
        if not isinstance(cluster_ids, list) or not cluster_ids:
            raise EmptySelection("clusterIds must be a non-empty list")
        params = parse_view_params(body.get("params") or {})
        view, _ = store.view(repo_id, params)
        for cid in cluster_ids:
            if cid not in view.clusters_by_id:
                raise UnknownCluster(cid)
        sel = store.add_selection(repo_id, str(body.get("name") or ""), cluster_ids)
        return _canonical_response({"selectionId": sel.id}, status_code=201)

    @app.post("/api/repos/{repo_id}/compare")
    async def compare_selections(repo_id: str, request: Request):
        body = await request.json()
        metric = body.get("metric") or METRIC_COMMITS
        if metric not in (METRIC_COMMITS, METRIC_CLOC):
            raise InvalidParams(f"metric must be {METRIC_COMMITS} or {METRIC_CLOC}")
        sel_a = store.selection(repo_id, str(body.get("selectionA")))
        sel_b = store.selection(repo_id, str(body.get("selectionB")))
        params = parse_view_params(body.get("params") or {})
        view, _ = store.view(repo_id, params)
        diff = analytics.compare(view, sel_a, sel_b, metric)
        return _canonical_response(diff_payload(diff))

    @app.get("/api/repos/{repo_id}/search")
    def search(repo_id: str, request: Request):
        queries = request.query_params.getlist("q")
        params = parse_view_params(request.query_params)
        view, _ = store.view(repo_id, params)
        block_ids = analytics.search(view, queries)
        return _canonical_response({"blockIds": sorted(block_ids)})

    @app.get("/api/repos/{repo_id}/timeline")
    def timeline(repo_id: str):
        snap = store.get(repo_id)
        return _canonical_response(timeline_payload(snap))

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
