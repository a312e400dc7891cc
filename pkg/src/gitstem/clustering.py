"""Similarity-based grouping of neighboring stem nodes.

Similarity is a weighted sum over five criteria: Jaccard for authors, commit
types and files, cosine over TF-IDF keyword vectors for messages, and a
logarithmic decay over the gap between date ranges.  A single left-to-right
pass grows a cluster while the difference (1 - similarity) against the
cluster aggregate stays within the threshold; release tags can force
boundaries, and an optional second pass merges similar non-neighbor clusters
when no cluster in between touches the same files.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Protocol, Sequence

from .errors import InvalidParams
from .ingest import CommitRecord
from .tfidf import cosine

SECONDS_PER_DAY = 86400.0

_RELEASE_RE = re.compile(r"^v?(\d+)\.(\d+)\.(\d+)$")


@dataclass(frozen=True)
class SimilarityWeights:
    author: float = 1.0
    date: float = 1.0
    type: float = 1.0
    file: float = 1.0
    message: float = 1.0

    def validate(self) -> None:
        values = (self.author, self.date, self.type, self.file, self.message)
        if any(w < 0 for w in values):
            raise InvalidParams("similarity weights must be non-negative")
        if sum(values) <= 0:
            raise InvalidParams("at least one similarity weight must be positive")

    def normalized(self) -> "SimilarityWeights":
        self.validate()
        total = self.author + self.date + self.type + self.file + self.message
        return SimilarityWeights(
            author=self.author / total,
            date=self.date / total,
            type=self.type / total,
            file=self.file / total,
            message=self.message / total,
        )


@dataclass(frozen=True)
class ClusterParams:
    threshold: float = 1.0
    weights: SimilarityWeights = SimilarityWeights()
    split_by_release: bool = False
    non_conflict: bool = False
    date_horizon_days: int = 365

    def validate(self) -> None:
        if not (0.0 <= self.threshold <= 1.0):
            raise InvalidParams("threshold must be within [0, 1]")
        if self.date_horizon_days <= 0:
            raise InvalidParams("date horizon must be positive")
        self.weights.validate()


@dataclass
class Aggregate:
    """The slice of a node or cluster that similarity looks at."""

    authors: frozenset[str]
    types: frozenset[str]
    files: frozenset[str]
    vector: dict[str, float]
    date_min: int
    date_max: int


class ClusterableNode(Protocol):
    """What cluster_stem needs from a stem node."""

    id: str
    commit_count: int
    cloc: int
    authors: frozenset[str]
    type_counts: dict[str, int]
    files: frozenset[str]
    vector: dict[str, float]
    date_min: int
    date_max: int
    releases: tuple[str, ...]


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    sa, sb = set(a), set(b)
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


def date_similarity(
    a_min: int, a_max: int, b_min: int, b_max: int, horizon_days: int
) -> float:
    """1 at touching/overlapping ranges, log decay to 0 at the horizon."""
    if b_min > a_max:
        gap_seconds = b_min - a_max
    elif a_min > b_max:
        gap_seconds = a_min - b_max
    else:
        gap_seconds = 0
    gap_days = gap_seconds / SECONDS_PER_DAY
    scaled = math.log1p(gap_days) / math.log1p(horizon_days)
    return 1.0 - min(1.0, scaled)


def similarity(
    a: Aggregate,
    b: Aggregate,
    weights: SimilarityWeights,
    horizon_days: int = 365,
) -> float:
    """Weighted additive similarity in [0, 1]; weights are normalized here."""
    w = weights.normalized()
    score = (
        w.author * jaccard(a.authors, b.authors)
        + w.type * jaccard(a.types, b.types)
        + w.file * jaccard(a.files, b.files)
        + w.message * cosine(a.vector, b.vector)
        + w.date
        * date_similarity(a.date_min, a.date_max, b.date_min, b.date_max, horizon_days)
    )
    return min(1.0, max(0.0, score))


def _cluster_id(stem_name: str, first_member: str) -> str:
    digest = hashlib.sha1(f"{stem_name}:{first_member}".encode("utf-8")).hexdigest()
    return f"c{digest[:12]}"


@dataclass
class Cluster:
    id: str
    stem_name: str
    members: list[str]
    commit_count: int
    cloc: int
    authors: set[str]
    type_counts: dict[str, int]
    files: set[str]
    vector_sum: dict[str, float]
    date_min: int
    date_max: int
    release_tag: str | None = None

    @property
    def keyword_vector(self) -> dict[str, float]:
        n = len(self.members)
        return {t: w / n for t, w in self.vector_sum.items()}

    def aggregate(self) -> Aggregate:
        return Aggregate(
            authors=frozenset(self.authors),
            types=frozenset(t for t, c in self.type_counts.items() if c > 0),
            files=frozenset(self.files),
            vector=self.keyword_vector,
            date_min=self.date_min,
            date_max=self.date_max,
        )

    def _absorb(self, node: ClusterableNode) -> None:
        self.members.append(node.id)
        self.commit_count += node.commit_count
        self.cloc += node.cloc
        self.authors |= node.authors
        for t, c in node.type_counts.items():
            self.type_counts[t] = self.type_counts.get(t, 0) + c
        self.files |= node.files
        for t, w in node.vector.items():
            self.vector_sum[t] = self.vector_sum.get(t, 0.0) + w
        self.date_min = min(self.date_min, node.date_min)
        self.date_max = max(self.date_max, node.date_max)


def _open_cluster(stem_name: str, node: ClusterableNode) -> Cluster:
    return Cluster(
        id=_cluster_id(stem_name, node.id),
        stem_name=stem_name,
        members=[node.id],
        commit_count=node.commit_count,
        cloc=node.cloc,
        authors=set(node.authors),
        type_counts=dict(node.type_counts),
        files=set(node.files),
        vector_sum=dict(node.vector),
        date_min=node.date_min,
        date_max=node.date_max,
    )


def _node_aggregate(node: ClusterableNode) -> Aggregate:
    return Aggregate(
        authors=frozenset(node.authors),
        types=frozenset(t for t, c in node.type_counts.items() if c > 0),
        files=frozenset(node.files),
        vector=dict(node.vector),
        date_min=node.date_min,
        date_max=node.date_max,
    )


def cluster_stem(
    stem_name: str, nodes: Sequence[ClusterableNode], params: ClusterParams
) -> list[Cluster]:
    """One left-to-right pass over a stem's nodes, in stem order.

    The merge test compares each node against the cluster's last member, not
    the whole-cluster aggregate: decisions are then pairwise between stem
    neighbors, which guarantees the cluster count never increases as the
    threshold grows (the slider contract).
    """
    params.validate()
    clusters: list[Cluster] = []
    current: Cluster | None = None
    prev: ClusterableNode | None = None
    boundary = False
    for node in nodes:
        if current is not None and prev is not None and not boundary:
            diff = 1.0 - similarity(
                _node_aggregate(prev),
                _node_aggregate(node),
                params.weights,
                params.date_horizon_days,
            )
            if diff <= params.threshold:
                current._absorb(node)
            else:
                current = None
        else:
            current = None
        if current is None:
            current = _open_cluster(stem_name, node)
            clusters.append(current)
        prev = node
        boundary = False
        if node.releases:
            current.release_tag = node.releases[-1]
            if params.split_by_release:
                boundary = True
    return clusters


def non_conflict_cluster(
    clusters: Sequence[Cluster],
    params: ClusterParams,
    events: list | None = None,
) -> list[Cluster]:
    """Merge similar non-neighbor clusters when intermediates don't conflict.

    Greedy single pass: an anchor absorbs a later candidate when their
    difference is within the threshold and no cluster between them shares a
    file with the anchor.  The candidate's members are appended; everything
    else keeps its stem order.  When a list is passed as `events`, one
    (anchor_id, candidate_id, intermediates, anchor_files) tuple is recorded
    per merge for auditing.
    """
    params.validate()
    result = [replace(c, members=list(c.members), authors=set(c.authors),
                      type_counts=dict(c.type_counts), files=set(c.files),
                      vector_sum=dict(c.vector_sum)) for c in clusters]
    i = 0
    while i < len(result):
        anchor = result[i]
        j = i + 1
        while j < len(result):
            candidate = result[j]
            between = result[i + 1 : j]
            diff = 1.0 - similarity(
                anchor.aggregate(),
                candidate.aggregate(),
                params.weights,
                params.date_horizon_days,
            )
            if diff <= params.threshold and all(
                not (anchor.files & b.files) for b in between
            ):
                if events is not None:
                    events.append(
                        (
                            anchor.id,
                            candidate.id,
                            [(b.id, frozenset(b.files)) for b in between],
                            frozenset(anchor.files),
                        )
                    )
                _merge_clusters(anchor, candidate)
                del result[j]
            else:
                j += 1
        i += 1
    return result


def _merge_clusters(anchor: Cluster, candidate: Cluster) -> None:
    anchor.members.extend(candidate.members)
    anchor.commit_count += candidate.commit_count
    anchor.cloc += candidate.cloc
    anchor.authors |= candidate.authors
    for t, c in candidate.type_counts.items():
        anchor.type_counts[t] = anchor.type_counts.get(t, 0) + c
    anchor.files |= candidate.files
    for t, w in candidate.vector_sum.items():
        anchor.vector_sum[t] = anchor.vector_sum.get(t, 0.0) + w
    anchor.date_min = min(anchor.date_min, candidate.date_min)
    anchor.date_max = max(anchor.date_max, candidate.date_max)
    if anchor.release_tag is None:
        anchor.release_tag = candidate.release_tag


@dataclass(frozen=True)
class Release:
    version: str
    commit_id: str
    date: int


def detect_releases(
    tags: Sequence[tuple[str, str]], commits_by_id: dict[str, CommitRecord]
) -> list[Release]:
    """Semantic-version tags resolved to commits, ordered by commit date."""
    found: dict[tuple[str, str], Release] = {}
    for name, commit_id in tags:
        m = _RELEASE_RE.match(name)
        if not m or commit_id not in commits_by_id:
            continue
        version = "{}.{}.{}".format(*m.groups())
        key = (version, commit_id)
        if key not in found:
            found[key] = Release(
                version=version,
                commit_id=commit_id,
                date=commits_by_id[commit_id].commit_date,
            )
    return sorted(
        found.values(),
        key=lambda r: (r.date, tuple(int(p) for p in r.version.split(".")), r.commit_id),
    )
