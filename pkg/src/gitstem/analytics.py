"""Summaries, details, comparisons, filters and search over a derived view.

Everything here is a pure read of the view (and, for filters, a fresh
derivation with adjusted parameters).  Top-k sizes are fixed: 3 for summary
bars, 10 for compared files, 20 for compared keywords.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .clustering import Cluster
from .errors import (
    EmptyKeyword,
    EmptyQuery,
    EmptySelection,
    InvalidRange,
    UnknownCluster,
)
from .views import View, ViewNode, derive_view

SUMMARY_TOP_K = 3
DIFF_FILES_TOP_K = 10
DIFF_KEYWORDS_TOP_K = 20

METRIC_COMMITS = "CommitCount"
METRIC_CLOC = "Cloc"


# --- grouped summary ----------------------------------------------------------


@dataclass
class SummaryColumn:
    cluster_id: str
    stem_name: str
    width_weight: float
    top_authors: list[tuple[str, float]]
    top_types: list[tuple[str, float]]
    top_files: list[tuple[str, float]]
    top_dirs: list[tuple[str, float]]
    top_keywords: list[tuple[str, float]]


def _top_k(values: dict[str, float], k: int) -> list[tuple[str, float]]:
    ranked = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(label, value) for label, value in ranked[:k] if value > 0]


def _dir_of(path: str) -> str:
    head, _, _ = path.rpartition("/")
    return head or "."


def _cluster_nodes(view: View, cluster: Cluster) -> list[ViewNode]:
    return [view.nodes_by_id[m] for m in cluster.members]


def _label_counts(nodes: list[ViewNode], by_cloc_files: bool):
    authors: dict[str, float] = {}
    types: dict[str, float] = {}
    files: dict[str, float] = {}
    dirs: dict[str, float] = {}
    keywords: dict[str, float] = {}
    for node in nodes:
        for rec in node.records:
            authors[rec.author_name] = authors.get(rec.author_name, 0) + 1
            types[rec.commit_type] = types.get(rec.commit_type, 0) + 1
        for path in node.files:
            weight = 1.0
            if by_cloc_files:
                weight = sum(fc.cloc for fc in node.base.file_changes if fc.path == path)
            files[path] = files.get(path, 0) + weight
        for d in {_dir_of(path) for path in node.files}:
            dirs[d] = dirs.get(d, 0) + 1
        for token, _count in node.keywords:
            keywords[token] = keywords.get(token, 0) + 1
    return authors, types, files, dirs, keywords


def grouped_summary(
    view: View, cluster_ids: list[str], by_cloc: bool = False
) -> list[SummaryColumn]:
    """One column per requested cluster, in the view's own order."""
    wanted = set(cluster_ids)
    for cid in wanted:
        if cid not in view.clusters_by_id:
            raise UnknownCluster(cid)
    columns: list[SummaryColumn] = []
    for cluster in view.clusters:
        if cluster.id not in wanted:
            continue
        nodes = _cluster_nodes(view, cluster)
        authors, types, files, dirs, keywords = _label_counts(nodes, by_cloc)
        columns.append(
            SummaryColumn(
                cluster_id=cluster.id,
                stem_name=cluster.stem_name,
                width_weight=float(cluster.cloc if by_cloc else cluster.commit_count),
                top_authors=_top_k(authors, SUMMARY_TOP_K),
                top_types=_top_k(types, SUMMARY_TOP_K),
                top_files=_top_k(files, SUMMARY_TOP_K),
                top_dirs=_top_k(dirs, SUMMARY_TOP_K),
                top_keywords=_top_k(keywords, SUMMARY_TOP_K),
            )
        )
    return columns


# --- cluster detail -----------------------------------------------------------


@dataclass
class IcicleNode:
    name: str
    children: list["IcicleNode"] = field(default_factory=list)
    cloc: int = 0
    commit_count: int = 0
    top_author: str | None = None


@dataclass
class CommitRow:
    id: str
    author_name: str
    commit_date: int
    message: str
    commit_type: str
    cloc: int
    is_csm_base: bool
    source_ids: list[str]
    sources: list["CommitRow"]
    pr_refs: list[int]


def _row_for_record(rec, is_base=False, source_ids=None, sources=None, pr_refs=None):
    return CommitRow(
        id=rec.id,
        author_name=rec.author_name,
        commit_date=rec.commit_date,
        message=rec.message,
        commit_type=rec.commit_type,
        cloc=rec.cloc,
        is_csm_base=is_base,
        source_ids=source_ids or [],
        sources=sources or [],
        pr_refs=pr_refs or [],
    )


def build_icicle(nodes: list[ViewNode]) -> IcicleNode:
    """File icicle tree over the members' change lists.

    Internal nodes aggregate children; every leaf is a file.  commit_count
    counts member nodes touching the subtree; top_author is the author with
    the most touching commits (label-ascending ties).
    """
    root = IcicleNode(name="")
    by_path: dict[tuple[str, ...], IcicleNode] = {(): root}
    path_commits: dict[tuple[str, ...], set[str]] = {(): set()}
    path_authors: dict[tuple[str, ...], dict[str, int]] = {(): {}}

    def ensure(parts: tuple[str, ...]) -> IcicleNode:
        if parts in by_path:
            return by_path[parts]
        parent = ensure(parts[:-1])
        node = IcicleNode(name=parts[-1])
        parent.children.append(node)
        by_path[parts] = node
        path_commits[parts] = set()
        path_authors[parts] = {}
        return node

    for vnode in nodes:
        for fc in vnode.base.file_changes:
            parts = tuple(p for p in fc.path.split("/") if p)
            if not parts:
                continue
            ensure(parts)
            for depth in range(len(parts) + 1):
                prefix = parts[:depth]
                by_path[prefix].cloc += fc.cloc
                if vnode.id not in path_commits[prefix]:
                    path_commits[prefix].add(vnode.id)
                    counts = path_authors[prefix]
                    counts[vnode.base.author_name] = counts.get(vnode.base.author_name, 0) + 1

    for parts, node in by_path.items():
        node.commit_count = len(path_commits[parts])
        authors = path_authors[parts]
        if authors:
            node.top_author = min(authors, key=lambda a: (-authors[a], a))
        node.children.sort(key=lambda child: child.name)
    return root


def cluster_detail(view: View, cluster_id: str) -> tuple[list[CommitRow], IcicleNode]:
    cluster = view.clusters_by_id.get(cluster_id)
    if cluster is None:
        raise UnknownCluster(cluster_id)
    nodes = _cluster_nodes(view, cluster)
    rows: list[CommitRow] = []
    for node in nodes:
        if node.csm is not None:
            sources = [_row_for_record(r) for r in node.records[1:]]
            rows.append(
                _row_for_record(
                    node.base,
                    is_base=True,
                    source_ids=list(node.csm.source_ids),
                    sources=sources,
                    pr_refs=list(node.csm.pr_refs),
                )
            )
        else:
            rows.append(_row_for_record(node.base))
    rows.sort(key=lambda r: (r.commit_date, r.id))
    return rows, build_icicle(nodes)


# --- comparison ---------------------------------------------------------------


@dataclass
class Selection:
    id: str
    name: str
    cluster_ids: list[str]
    captured_at: int


@dataclass
class DiffEntry:
    label: str
    value_a: float
    value_b: float


@dataclass
class DiffSets:
    intersection: list[DiffEntry]
    only_a: list[DiffEntry]
    only_b: list[DiffEntry]


@dataclass
class DiffResult:
    metric: str
    authors: DiffSets
    types: DiffSets
    files: DiffSets
    keywords: DiffSets


def _selection_nodes(view: View, selection: Selection) -> list[ViewNode]:
    seen: set[str] = set()
    nodes: list[ViewNode] = []
    for cid in selection.cluster_ids:
        cluster = view.clusters_by_id.get(cid)
        if cluster is None:
            continue
        for member in cluster.members:
            if member not in seen:
                seen.add(member)
                nodes.append(view.nodes_by_id[member])
    return nodes


def _metric_values(nodes: list[ViewNode], metric: str):
    authors: dict[str, float] = {}
    types: dict[str, float] = {}
    files: dict[str, float] = {}
    keywords: dict[str, float] = {}
    for node in nodes:
        if metric == METRIC_CLOC:
            authors[node.base.author_name] = authors.get(node.base.author_name, 0) + node.cloc
            types[node.base.commit_type] = types.get(node.base.commit_type, 0) + node.cloc
            for fc in node.base.file_changes:
                files[fc.path] = files.get(fc.path, 0) + fc.cloc
        else:
            for rec in node.records:
                authors[rec.author_name] = authors.get(rec.author_name, 0) + 1
                types[rec.commit_type] = types.get(rec.commit_type, 0) + 1
            for path in node.files:
                files[path] = files.get(path, 0) + 1
        for token, weight in node.vector.items():
            keywords[token] = keywords.get(token, 0.0) + weight
    return authors, types, files, keywords


def _split_sets(
    a: dict[str, float], b: dict[str, float], top_k: int | None
) -> DiffSets:
    keys_a = set(a)
    keys_b = set(b)
    if top_k is not None:
        keys_a = {label for label, _ in _top_k(a, top_k)}
        keys_b = {label for label, _ in _top_k(b, top_k)}

    def entries(labels: set[str]) -> list[DiffEntry]:
        out = [DiffEntry(lbl, float(a.get(lbl, 0.0)), float(b.get(lbl, 0.0))) for lbl in labels]
        out.sort(key=lambda e: (-max(e.value_a, e.value_b), e.label))
        return out

    return DiffSets(
        intersection=entries(keys_a & keys_b),
        only_a=entries(keys_a - keys_b),
        only_b=entries(keys_b - keys_a),
    )


def _minmax_normalize(sets: DiffSets, a_labels: set[str], b_labels: set[str]) -> None:
    values = []
    for entry in sets.intersection + sets.only_a + sets.only_b:
        if entry.label in a_labels:
            values.append(entry.value_a)
        if entry.label in b_labels:
            values.append(entry.value_b)
    if not values:
        return
    lo, hi = min(values), max(values)
    span = hi - lo

    def norm(v: float) -> float:
        if span == 0:
            return 1.0
        return (v - lo) / span

    for entry in sets.intersection + sets.only_a + sets.only_b:
        entry.value_a = norm(entry.value_a) if entry.label in a_labels else 0.0
        entry.value_b = norm(entry.value_b) if entry.label in b_labels else 0.0


def compare(view: View, sel_a: Selection, sel_b: Selection, metric: str = METRIC_COMMITS) -> DiffResult:
    """Two-way diff over authors, types, files (top 10) and keywords (top 20)."""
    nodes_a = _selection_nodes(view, sel_a)
    nodes_b = _selection_nodes(view, sel_b)
    if not nodes_a or not nodes_b:
        raise EmptySelection("both selections must resolve to at least one cluster")
    authors_a, types_a, files_a, kw_a = _metric_values(nodes_a, metric)
    authors_b, types_b, files_b, kw_b = _metric_values(nodes_b, metric)

    keywords = _split_sets(kw_a, kw_b, DIFF_KEYWORDS_TOP_K)
    top_a = {label for label, _ in _top_k(kw_a, DIFF_KEYWORDS_TOP_K)}
    top_b = {label for label, _ in _top_k(kw_b, DIFF_KEYWORDS_TOP_K)}
    _minmax_normalize(keywords, top_a, top_b)

    return DiffResult(
        metric=metric,
        authors=_split_sets(authors_a, authors_b, None),
        types=_split_sets(types_a, types_b, None),
        files=_split_sets(files_a, files_b, DIFF_FILES_TOP_K),
        keywords=keywords,
    )


# --- filters ------------------------------------------------------------------


def filter_temporal(view: View, date_from: int, date_to: int) -> View:
    if date_from > date_to:
        raise InvalidRange("date range start is after its end")
    return derive_view(
        view.snapshot, view.params.replace(date_from=date_from, date_to=date_to)
    )


def filter_keyword(view: View, criterion: str, keyword: str, mode: str = "include") -> View:
    """Narrow the view by one more keyword filter; filters stack conjunctively."""
    if not keyword:
        raise EmptyKeyword("keyword filter text is empty")
    stacked = view.params.kw_filters + ((criterion, keyword, mode),)
    return derive_view(view.snapshot, view.params.replace(kw_filters=stacked))


def filter_stem_types(view: View, visible: set[str]) -> View:
    return derive_view(
        view.snapshot, view.params.replace(stem_types=tuple(sorted(visible)))
    )


# --- search -------------------------------------------------------------------


def search_nodes(view: View, queries: list[str]) -> set[str]:
    """Node ids matching any query (case-insensitive substring, OR-combined).

    Scans stem (branch) names, tags, messages, authors, commit ids and
    modified file paths.  The view itself is never changed.
    """
    if not queries or any(not q for q in queries):
        raise EmptyQuery("search query is empty")
    needles = [q.lower() for q in queries]
    hits: set[str] = set()
    for node in view.nodes_by_id.values():
        haystacks = [node.stem_name.lower()]
        haystacks.extend(t.lower() for t in node.tags)
        for rec in node.records:
            haystacks.append(rec.id)
            haystacks.append(rec.author_name.lower())
            haystacks.append(rec.message.lower())
            haystacks.extend(fc.path.lower() for fc in rec.file_changes)
        if any(n in h for n in needles for h in haystacks):
            hits.add(node.id)
    return hits


def search(view: View, queries: list[str]) -> set[str]:
    """Block ids whose member nodes match any query."""
    nodes = search_nodes(view, queries)
    return {view.layout.block_of_node[nid] for nid in nodes if nid in view.layout.block_of_node}
