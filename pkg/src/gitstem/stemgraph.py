"""Commit DAG and its reduction to stems.

A stem is a first-parent path of commits, ancestor first.  Stems partition
the DAG: the main branch claims its first-parent chain first, then named
branch heads and PR heads (most recent head first) claim what is left, and
any still-unclaimed commits are grouped into implicit stems.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import CycleDetected, DanglingParent, UnknownMainBranch
from .ingest import CommitRecord

REF_BRANCH = "branch"
REF_TAG = "tag"
REF_PR_HEAD = "prHead"

STEM_MAIN = "Main"
STEM_EXPLICIT = "Explicit"
STEM_IMPLICIT = "Implicit"
STEM_PR_OPEN = "PrOpen"
STEM_PR_MERGED = "PrMerged"
STEM_PR_CLOSED = "PrClosed"

STEM_TYPES = (
    STEM_MAIN,
    STEM_EXPLICIT,
    STEM_IMPLICIT,
    STEM_PR_OPEN,
    STEM_PR_MERGED,
    STEM_PR_CLOSED,
)

PR_STATE_TO_STEM_TYPE = {
    "Open": STEM_PR_OPEN,
    "Merged": STEM_PR_MERGED,
    "Closed": STEM_PR_CLOSED,
}


@dataclass
class Head:
    ref_name: str
    commit_id: str
    ref_kind: str  # branch | tag | prHead
    pr_number: int | None = None
    pr_state: str | None = None


@dataclass
class CommitDag:
    nodes: dict[str, CommitRecord]
    children: dict[str, list[str]]
    heads: list[Head]
    topo_index: dict[str, int] = field(default_factory=dict)

    def slot_key(self, commit_id: str) -> tuple[int, int, str]:
        rec = self.nodes[commit_id]
        return (rec.commit_date, self.topo_index[commit_id], commit_id)


@dataclass
class Stem:
    name: str
    stem_type: str
    commits: list[str]  # ancestor first

    @property
    def head_id(self) -> str:
        return self.commits[-1]


def build_dag(commits: list[CommitRecord], heads: list[Head]) -> CommitDag:
    """Index children, verify acyclicity, and assign a stable topo order.

    The topological index breaks commit-date ties deterministically: parents
    always sort before children, and equal candidates pop by (date, id).
    """
    nodes = {rec.id: rec for rec in commits}
    children: dict[str, list[str]] = {rec.id: [] for rec in commits}
    indegree: dict[str, int] = {rec.id: 0 for rec in commits}
    for rec in commits:
        for parent in rec.parents:
            if parent not in nodes:
                raise DanglingParent(rec.id, parent)
            children[parent].append(rec.id)
            indegree[rec.id] += 1

    # Kahn's algorithm; the heap makes the order input-independent.
    ready = [
        (nodes[cid].commit_date, cid) for cid, deg in indegree.items() if deg == 0
    ]
    heapq.heapify(ready)
    topo_index: dict[str, int] = {}
    while ready:
        _, cid = heapq.heappop(ready)
        topo_index[cid] = len(topo_index)
        for child in children[cid]:
            indegree[child] -= 1
            if indegree[child] == 0:
                heapq.heappush(ready, (nodes[child].commit_date, child))
    if len(topo_index) != len(nodes):
        raise CycleDetected("commit graph contains a cycle")

    return CommitDag(nodes=nodes, children=children, heads=list(heads), topo_index=topo_index)


def first_parent_chain(dag: CommitDag, head_id: str) -> list[str]:
    """Full first-parent ancestry of head_id, ancestor first."""
    chain = []
    cur: str | None = head_id
    while cur is not None:
        chain.append(cur)
        parents = dag.nodes[cur].parents
        cur = parents[0] if parents else None
    chain.reverse()
    return chain


def build_stems(dag: CommitDag, main_branch: str = "master") -> list[Stem]:
    """Partition the DAG into first-parent stems, main branch first."""
    branch_heads = {h.ref_name: h for h in dag.heads if h.ref_kind == REF_BRANCH}
    if main_branch not in branch_heads:
        raise UnknownMainBranch(main_branch)

    claimed: set[str] = set()
    stems: list[Stem] = []

    main_chain = first_parent_chain(dag, branch_heads[main_branch].commit_id)
    claimed.update(main_chain)
    stems.append(Stem(name=main_branch, stem_type=STEM_MAIN, commits=main_chain))

    def claim_chain(head_id: str) -> list[str]:
        chain = []
        cur: str | None = head_id
        while cur is not None and cur not in claimed:
            chain.append(cur)
            claimed.add(cur)
            parents = dag.nodes[cur].parents
            cur = parents[0] if parents else None
        chain.reverse()
        return chain

    def head_order(head: Head) -> tuple[int, str]:
        # most recent head first; name breaks ties
        return (-dag.nodes[head.commit_id].commit_date, head.ref_name)

    named = [
        h
        for h in dag.heads
        if h.ref_kind == REF_BRANCH and h.ref_name != main_branch and h.commit_id in dag.nodes
    ]
    for head in sorted(named, key=head_order):
        chain = claim_chain(head.commit_id)
        if chain:
            stems.append(Stem(name=head.ref_name, stem_type=STEM_EXPLICIT, commits=chain))

    pr_heads = [h for h in dag.heads if h.ref_kind == REF_PR_HEAD and h.commit_id in dag.nodes]
    for head in sorted(pr_heads, key=head_order):
        chain = claim_chain(head.commit_id)
        if chain:
            stems.append(
                Stem(
                    name=head.ref_name,
                    stem_type=PR_STATE_TO_STEM_TYPE.get(head.pr_state or "", STEM_PR_OPEN),
                    commits=chain,
                )
            )

    # Implicit stems: scan what is left by commit date descending.  A commit
    # seeds a stem only when no unclaimed child continues the chain above it;
    # otherwise it will be swept up when that child's chain is claimed.
    remaining = sorted(
        (cid for cid in dag.nodes if cid not in claimed),
        key=lambda cid: (-dag.nodes[cid].commit_date, cid),
    )
    implicit_no = 0
    for cid in remaining:
        if cid in claimed:
            continue
        if any(
            child not in claimed and dag.nodes[child].parents[0] == cid
            for child in dag.children[cid]
        ):
            continue
        chain = claim_chain(cid)
        if chain:
            implicit_no += 1
            stems.append(
                Stem(name=f"implicit-{implicit_no}", stem_type=STEM_IMPLICIT, commits=chain)
            )

    return stems


def order_stems(stems: list[Stem], dag: CommitDag) -> list[Stem]:
    """Main first, then by last-commit date descending; names break ties."""
    main = [s for s in stems if s.stem_type == STEM_MAIN]
    rest = [s for s in stems if s.stem_type != STEM_MAIN]
    rest.sort(key=lambda s: (-dag.nodes[s.commits[-1]].commit_date, s.name))
    return main + rest
