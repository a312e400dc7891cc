"""Context-preserving squash merge.

Each merge commit (the base) absorbs the first-parent tails of its non-first
parents (the sources) into a single node, pulling the sources' authors,
types, messages and any merged-PR text along so no context is lost when the
source stems disappear.  Main-stem commits are never consumed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import NotAMerge
from .ingest import PrLinks
from .keywords import extract_keywords
from .stemgraph import STEM_MAIN, CommitDag, Stem, order_stems


@dataclass
class CsmNode:
    base_id: str
    source_ids: list[str]  # ancestor first, non-first parents in parent order
    coauthors: set[str] = field(default_factory=set)
    fused_message: str = ""
    fused_keywords: list[tuple[str, int]] = field(default_factory=list)
    commit_types: dict[str, int] = field(default_factory=dict)
    pr_refs: list[int] = field(default_factory=list)


@dataclass
class ActiveStructure:
    """The stem structure a view operates on: squashed or raw."""

    stems: list[Stem]
    csm_nodes: list[CsmNode]
    # base↔source links, exposed for rendering only when CSM is off
    csm_edges: list[tuple[str, str]]


def _tail_sources(
    merge_id: str,
    parents: list[str],
    current: dict[str, list[str]],
    stem_name_of: dict[str, str],
    stem_type_by_name: dict[str, str],
    consumed: set[str],
) -> list[str]:
    """Contiguous unconsumed stem tails ending at each non-first parent."""
    own = stem_name_of.get(merge_id)
    out: list[str] = []
    taken: set[str] = set()
    for p in parents[1:]:
        if p in consumed or p in taken:
            continue
        s_name = stem_name_of.get(p)
        if s_name is None or s_name == own:
            continue
        if stem_type_by_name.get(s_name) == STEM_MAIN:
            continue
        commits = current[s_name]
        try:
            i = commits.index(p)
        except ValueError:
            continue
        tail: list[str] = []
        for k in range(i, -1, -1):
            c = commits[k]
            if c in consumed or c in taken:
                break
            tail.append(c)
        tail.reverse()
        out.extend(tail)
        taken.update(tail)
    return out


def csm_sources(
    merge_id: str,
    stems: list[Stem],
    dag: CommitDag,
    consumed: set[str] | frozenset[str] = frozenset(),
) -> list[str]:
    """Source commits a merge would absorb, ancestor first.

    Raises NotAMerge for commits with fewer than two parents.
    """
    rec = dag.nodes[merge_id]
    if len(rec.parents) < 2:
        raise NotAMerge(f"{merge_id} has {len(rec.parents)} parent(s)")
    current = {s.name: [c for c in s.commits if c not in consumed] for s in stems}
    stem_name_of = {c: s.name for s in stems for c in s.commits if c not in consumed}
    stem_types = {s.name: s.stem_type for s in stems}
    return _tail_sources(
        merge_id, rec.parents, current, stem_name_of, stem_types, set(consumed)
    )


def _fuse(
    base_id: str,
    sources: list[str],
    dag: CommitDag,
    pr_links: PrLinks,
) -> CsmNode:
    base = dag.nodes[base_id]
    parts = [base.message]
    coauthors: set[str] = set()
    types: Counter[str] = Counter([base.commit_type])
    for sid in sources:
        rec = dag.nodes[sid]
        coauthors.add(rec.author_name)
        types[rec.commit_type] += 1
        if rec.message:
            parts.append(rec.message)
    pr_refs = list(pr_links.merged_by_commit.get(base_id, []))
    for number in pr_refs:
        pr = pr_links.by_number[number]
        if pr.title:
            parts.append(pr.title)
        if pr.body:
            parts.append(pr.body)
    fused_message = "\n\n".join(p for p in parts if p)
    return CsmNode(
        base_id=base_id,
        source_ids=list(sources),
        coauthors=coauthors,
        fused_message=fused_message,
        fused_keywords=extract_keywords(fused_message),
        commit_types=dict(types),
        pr_refs=pr_refs,
    )


def apply_csm(
    stems: list[Stem], dag: CommitDag, pr_links: PrLinks
) -> tuple[list[Stem], list[CsmNode]]:
    """Run the squash pass over every stem.

    The main stem goes first, then the others by most recent last commit;
    within a stem, bases are processed earliest first, so when two bases
    could absorb the same source the leftmost one wins.  Consumed commits
    are removed from their stems and emptied stems are dropped.
    """
    processing_order = order_stems(stems, dag)
    current: dict[str, list[str]] = {s.name: list(s.commits) for s in stems}
    stem_name_of: dict[str, str] = {c: s.name for s in stems for c in s.commits}
    stem_types = {s.name: s.stem_type for s in stems}
    consumed: set[str] = set()
    csm_nodes: list[CsmNode] = []

    for stem in processing_order:
        merges = [c for c in current[stem.name] if dag.nodes[c].is_merge]
        merges.sort(key=dag.slot_key)
        for m in merges:
            if m in consumed:
                continue
            sources = _tail_sources(
                m, dag.nodes[m].parents, current, stem_name_of, stem_types, consumed
            )
            if not sources:
                continue
            csm_nodes.append(_fuse(m, sources, dag, pr_links))
            consumed.update(sources)
            for sid in sources:
                current[stem_name_of[sid]].remove(sid)
                del stem_name_of[sid]

    squashed = [
        Stem(name=s.name, stem_type=s.stem_type, commits=current[s.name])
        for s in stems
        if current[s.name]
    ]
    return squashed, csm_nodes


def toggle_csm(snapshot, enabled: bool) -> ActiveStructure:
    """Pick the squashed or the raw stem structure for downstream views."""
    if enabled:
        return ActiveStructure(
            stems=snapshot.csm_stems, csm_nodes=snapshot.csm_nodes, csm_edges=[]
        )
    edges = [
        (node.base_id, sid)
        for node in snapshot.csm_nodes
        for sid in node.source_ids
    ]
    return ActiveStructure(stems=snapshot.raw_stems, csm_nodes=[], csm_edges=edges)
