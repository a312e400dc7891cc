"""Derived views: snapshot + parameters -> clustered, laid-out stem graph.

A view is a pure function of the immutable snapshot and a parameter tuple
(CSM on/off, clustering knobs, filters).  Filters reduce the node set and
clustering/layout are recomputed on what remains.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

from .clustering import Cluster, ClusterParams, SimilarityWeights, cluster_stem, non_conflict_cluster
from .csm import CsmNode, toggle_csm
from .errors import EmptyKeyword, InvalidParams, InvalidRange
from .ingest import CommitRecord
from .layout import LayoutModel, LayoutNode, LayoutStemInput, compute_layout
from .snapshot import AnalysisSnapshot
from .stemgraph import STEM_MAIN, STEM_TYPES, Stem, order_stems

KW_CRITERIA = ("author", "type", "file", "message")
KW_MODES = ("include", "exclude")


@dataclass(frozen=True)
class ViewParams:
    csm: bool = True
    threshold: float = 1.0
    w_author: float = 1.0
    w_date: float = 1.0
    w_type: float = 1.0
    w_file: float = 1.0
    w_message: float = 1.0
    release_split: bool = False
    non_conflict: bool = False
    date_from: int | None = None
    date_to: int | None = None
    stem_types: tuple[str, ...] | None = None  # None means every type
    # conjunctive (criterion, text, mode) filters; later entries narrow further
    kw_filters: tuple[tuple[str, str, str], ...] = ()
    horizon_days: int = 365

    def cluster_params(self) -> ClusterParams:
        return ClusterParams(
            threshold=self.threshold,
            weights=SimilarityWeights(
                author=self.w_author,
                date=self.w_date,
                type=self.w_type,
                file=self.w_file,
                message=self.w_message,
            ),
            split_by_release=self.release_split,
            non_conflict=self.non_conflict,
            date_horizon_days=self.horizon_days,
        )

    def validate(self) -> None:
        self.cluster_params().validate()
        if self.date_from is not None and self.date_to is not None:
            if self.date_from > self.date_to:
                raise InvalidRange("date range start is after its end")
        if self.stem_types is not None:
            unknown = set(self.stem_types) - set(STEM_TYPES)
            if unknown:
                raise InvalidParams(f"unknown stem types: {sorted(unknown)}")
        for criterion, text, mode in self.kw_filters:
            if criterion not in KW_CRITERIA:
                raise InvalidParams(f"keyword criterion must be one of {KW_CRITERIA}")
            if mode not in KW_MODES:
                raise InvalidParams(f"keyword mode must be one of {KW_MODES}")
            if not text:
                raise EmptyKeyword("keyword filter text is empty")

    def replace(self, **changes) -> "ViewParams":
        return dataclasses.replace(self, **changes)

    def cache_key(self) -> str:
        payload = dataclasses.asdict(self)
        payload["stem_types"] = (
            sorted(self.stem_types) if self.stem_types is not None else None
        )
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


@dataclass
class ViewNode:
    """One display node: a plain commit or a CSM base with its sources."""

    id: str
    stem_name: str
    records: tuple[CommitRecord, ...]  # base first
    csm: CsmNode | None
    message: str
    keywords: tuple[tuple[str, int], ...]
    vector: dict[str, float]
    commit_count: int
    cloc: int
    authors: frozenset[str]
    type_counts: dict[str, int]
    files: frozenset[str]
    date: int
    date_min: int
    date_max: int
    releases: tuple[str, ...]
    tags: tuple[str, ...]

    @property
    def base(self) -> CommitRecord:
        return self.records[0]


def _plain_node(snap: AnalysisSnapshot, stem_name: str, rec: CommitRecord) -> ViewNode:
    return ViewNode(
        id=rec.id,
        stem_name=stem_name,
        records=(rec,),
        csm=None,
        message=rec.message,
        keywords=tuple(rec.keywords),
        vector=snap.tfidf.per_commit_vector.get(rec.id, {}),
        commit_count=1,
        cloc=rec.cloc,
        authors=frozenset({rec.author_name}),
        type_counts={rec.commit_type: 1},
        files=frozenset(fc.path for fc in rec.file_changes),
        date=rec.commit_date,
        date_min=rec.commit_date,
        date_max=rec.commit_date,
        releases=tuple(snap.release_versions.get(rec.id, ())),
        tags=tuple(rec.tags),
    )


def _csm_node(snap: AnalysisSnapshot, stem_name: str, node: CsmNode) -> ViewNode:
    base = snap.commits_by_id[node.base_id]
    records = (base,) + tuple(snap.commits_by_id[s] for s in node.source_ids)
    dates = [r.commit_date for r in records]
    releases: list[str] = []
    tags: list[str] = []
    for rec in records:
        releases.extend(snap.release_versions.get(rec.id, ()))
        tags.extend(rec.tags)
    return ViewNode(
        id=node.base_id,
        stem_name=stem_name,
        records=records,
        csm=node,
        message=node.fused_message,
        keywords=tuple(node.fused_keywords),
        vector=snap.tfidf.vector_for(node.fused_keywords),
        commit_count=len(records),
        cloc=base.cloc,
        authors=frozenset({base.author_name}) | frozenset(node.coauthors),
        type_counts=dict(node.commit_types),
        files=frozenset(fc.path for fc in base.file_changes),
        date=base.commit_date,
        date_min=min(dates),
        date_max=max(dates),
        releases=tuple(releases),
        tags=tuple(tags),
    )


def _node_matches_keyword(node: ViewNode, criterion: str, needle: str) -> bool:
    needle = needle.lower()
    for rec in node.records:
        if criterion == "author":
            if needle in rec.author_name.lower():
                return True
        elif criterion == "type":
            if needle in rec.commit_type.lower():
                return True
        elif criterion == "file":
            if any(needle in fc.path.lower() for fc in rec.file_changes):
                return True
        elif criterion == "message":
            if needle in rec.message.lower():
                return True
    return False


@dataclass
class ActiveStem:
    name: str
    stem_type: str
    nodes: list[ViewNode]
    clusters: list[Cluster] = field(default_factory=list)


@dataclass
class View:
    snapshot: AnalysisSnapshot
    params: ViewParams
    stems: list[ActiveStem]
    clusters: list[Cluster]
    clusters_by_id: dict[str, Cluster]
    nodes_by_id: dict[str, ViewNode]
    layout: LayoutModel
    csm_edges: list[tuple[str, str]]  # (base id, source id); only when csm off
    nc_events: list = field(default_factory=list)

    @property
    def total_commit_count(self) -> int:
        return sum(n.commit_count for n in self.nodes_by_id.values())


def derive_view(snapshot: AnalysisSnapshot, params: ViewParams) -> View:
    params.validate()
    structure = toggle_csm(snapshot, params.csm)
    ordered: list[Stem] = order_stems(structure.stems, snapshot.dag)

    visible = (
        set(params.stem_types) if params.stem_types is not None else set(STEM_TYPES)
    )
    csm_by_base = {n.base_id: n for n in structure.csm_nodes}

    stems: list[ActiveStem] = []
    nodes_by_id: dict[str, ViewNode] = {}
    for stem in ordered:
        if stem.stem_type not in visible:
            continue
        nodes: list[ViewNode] = []
        for cid in stem.commits:
            if cid in csm_by_base:
                node = _csm_node(snapshot, stem.name, csm_by_base[cid])
            else:
                node = _plain_node(snapshot, stem.name, snapshot.commits_by_id[cid])
            if params.date_from is not None and node.date < params.date_from:
                continue
            if params.date_to is not None and node.date > params.date_to:
                continue
            dropped = False
            for criterion, text, mode in params.kw_filters:
                matched = _node_matches_keyword(node, criterion, text)
                if matched != (mode == "include"):
                    dropped = True
                    break
            if dropped:
                continue
            nodes.append(node)
        if not nodes:
            continue
        stems.append(ActiveStem(name=stem.name, stem_type=stem.stem_type, nodes=nodes))
        for node in nodes:
            nodes_by_id[node.id] = node

    cparams = params.cluster_params()
    clusters: list[Cluster] = []
    nc_events: list = []
    for stem in stems:
        stem.clusters = cluster_stem(stem.name, stem.nodes, cparams)
        if params.non_conflict:
            stem.clusters = non_conflict_cluster(stem.clusters, cparams, events=nc_events)
        clusters.extend(stem.clusters)

    cluster_of: dict[str, str] = {}
    for cluster in clusters:
        for member in cluster.members:
            cluster_of[member] = cluster.id

    layout_inputs = [
        LayoutStemInput(
            name=stem.name,
            is_main=stem.stem_type == STEM_MAIN,
            nodes=tuple(
                LayoutNode(
                    id=node.id,
                    date=node.date,
                    topo=snapshot.dag.topo_index[node.id],
                    commit_count=node.commit_count,
                    cluster_id=cluster_of[node.id],
                    is_csm_base=node.csm is not None,
                    releases=node.releases,
                )
                for node in stem.nodes
            ),
        )
        for stem in stems
    ]
    layout = compute_layout(layout_inputs)

    csm_edges = [
        (base, source)
        for base, source in structure.csm_edges
        if base in nodes_by_id and source in nodes_by_id
    ]

    return View(
        snapshot=snapshot,
        params=params,
        stems=stems,
        clusters=clusters,
        clusters_by_id={c.id: c for c in clusters},
        nodes_by_id=nodes_by_id,
        layout=layout,
        csm_edges=csm_edges,
        nc_events=nc_events,
    )
