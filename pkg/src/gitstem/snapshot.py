"""Immutable per-repository analysis snapshot.

Built once from raw inputs (log text, optional PR dump and tag list), then
shared read-only by every derived view: commits, the DAG, both stem
structures (raw and squashed), the TF-IDF index, releases and PR links.
Snapshots serialize to a versioned JSON envelope from which everything is
re-derived at load time; stems and clusters are never persisted.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .clustering import Release, detect_releases
from .csm import CsmNode, apply_csm
from .errors import EmptyCorpus, GitStemError
from .ingest import (
    CommitRecord,
    FileChange,
    PrLinks,
    PullRequest,
    attach_pull_requests,
    classify_commit_type,
    format_iso8601,
    parse_git_log,
    parse_pr_dump,
    parse_tag_list,
)
from .keywords import extract_keywords
from .stemgraph import Head, REF_BRANCH, REF_PR_HEAD, REF_TAG, CommitDag, Stem, build_dag, build_stems
from .tfidf import TfIdfIndex, build_tfidf_index

SNAPSHOT_VERSION = 1


@dataclass
class AnalysisSnapshot:
    repo_id: str
    main_branch: str
    commits: list[CommitRecord]
    commits_by_id: dict[str, CommitRecord]
    dag: CommitDag
    raw_stems: list[Stem]
    csm_stems: list[Stem]
    csm_nodes: list[CsmNode]
    csm_by_base: dict[str, CsmNode]
    tfidf: TfIdfIndex
    releases: list[Release]
    release_versions: dict[str, list[str]]  # commit id -> versions on it
    prs: list[PullRequest]
    pr_links: PrLinks
    warnings: list[str] = field(default_factory=list)
    created_at: int = 0

    @property
    def commit_count(self) -> int:
        return len(self.commits)


def _prepare_records(records: list[CommitRecord], stop_words) -> None:
    """Fill commit type and keywords where not already present."""
    for rec in records:
        if not rec.commit_type:
            rec.commit_type = classify_commit_type(rec.message)
        if not rec.keywords and rec.message:
            rec.keywords = extract_keywords(rec.message, stop_words)


def _drop_shallow_boundaries(
    records: list[CommitRecord], warnings: list[str]
) -> list[CommitRecord]:
    """Exclude records whose parents cannot be resolved (shallow clones)."""
    kept = {rec.id: rec for rec in records}
    while True:
        missing = [
            rec.id
            for rec in kept.values()
            if any(p not in kept for p in rec.parents)
        ]
        if not missing:
            return [rec for rec in records if rec.id in kept]
        for cid in missing:
            warnings.append(f"commit {cid} dropped: unresolvable parent (shallow boundary)")
            del kept[cid]


def build_snapshot(
    repo_id: str,
    log_text: str,
    pr_entries: list[dict] | None = None,
    tag_text: str | None = None,
    main_branch: str = "master",
    stop_words=None,
    created_at: int | None = None,
) -> AnalysisSnapshot:
    records = parse_git_log(log_text)
    prs = parse_pr_dump(pr_entries or [])
    tags = parse_tag_list(tag_text or "")
    return build_snapshot_from_records(
        repo_id,
        records,
        prs=prs,
        extra_tags=tags,
        main_branch=main_branch,
        stop_words=stop_words,
        created_at=created_at,
    )


def build_snapshot_from_records(
    repo_id: str,
    records: list[CommitRecord],
    prs: list[PullRequest] | None = None,
    extra_tags: list[tuple[str, str]] | None = None,
    releases: list[Release] | None = None,
    main_branch: str = "master",
    stop_words=None,
    created_at: int | None = None,
) -> AnalysisSnapshot:
    if not records:
        raise EmptyCorpus("no commits")
    warnings: list[str] = []
    _prepare_records(records, stop_words)
    records = _drop_shallow_boundaries(records, warnings)
    if not records:
        raise EmptyCorpus("no commits left after dropping shallow boundaries")
    commits_by_id = {rec.id: rec for rec in records}
    if len(commits_by_id) != len(records):
        raise GitStemError("duplicate commit ids in input")

    prs = prs or []
    pr_links = attach_pull_requests(commits_by_id, prs)
    warnings.extend(pr_links.warnings)

    heads: list[Head] = []
    tag_to_commit: dict[str, str] = {}
    for rec in records:
        for branch in rec.branch_heads:
            heads.append(Head(ref_name=branch, commit_id=rec.id, ref_kind=REF_BRANCH))
        for tag in rec.tags:
            tag_to_commit[tag] = rec.id
    for name, commit_id in extra_tags or []:
        if commit_id in commits_by_id:
            tag_to_commit[name] = commit_id
    for name in sorted(tag_to_commit):
        heads.append(Head(ref_name=name, commit_id=tag_to_commit[name], ref_kind=REF_TAG))
    for pr in prs:
        if pr.head_commit_id and pr.head_commit_id in commits_by_id:
            heads.append(
                Head(
                    ref_name=f"pr-{pr.number}",
                    commit_id=pr.head_commit_id,
                    ref_kind=REF_PR_HEAD,
                    pr_number=pr.number,
                    pr_state=pr.state,
                )
            )

    dag = build_dag(records, heads)
    tfidf = build_tfidf_index(records)
    raw_stems = build_stems(dag, main_branch)
    csm_stems, csm_nodes = apply_csm(raw_stems, dag, pr_links)

    if releases is None:
        releases = detect_releases(sorted(tag_to_commit.items()), commits_by_id)
    release_versions: dict[str, list[str]] = {}
    for rel in releases:
        release_versions.setdefault(rel.commit_id, []).append(rel.version)

    return AnalysisSnapshot(
        repo_id=repo_id,
        main_branch=main_branch,
        commits=records,
        commits_by_id=commits_by_id,
        dag=dag,
        raw_stems=raw_stems,
        csm_stems=csm_stems,
        csm_nodes=csm_nodes,
        csm_by_base={n.base_id: n for n in csm_nodes},
        tfidf=tfidf,
        releases=releases,
        release_versions=release_versions,
        prs=prs,
        pr_links=pr_links,
        warnings=warnings,
        created_at=int(time.time()) if created_at is None else created_at,
    )


# --- serialization -----------------------------------------------------------


def _commit_to_dict(rec: CommitRecord) -> dict:
    return {
        "id": rec.id,
        "parents": rec.parents,
        "authorName": rec.author_name,
        "authorEmail": rec.author_email,
        "authorDate": rec.author_date,
        "commitDate": rec.commit_date,
        "message": rec.message,
        "fileChanges": [
            {
                "path": fc.path,
                "insertions": fc.insertions,
                "deletions": fc.deletions,
                "isBinary": fc.is_binary,
            }
            for fc in rec.file_changes
        ],
        "tags": rec.tags,
        "branchHeads": rec.branch_heads,
        "commitType": rec.commit_type,
        "keywords": [[t, c] for t, c in rec.keywords],
    }


def _commit_from_dict(d: dict) -> CommitRecord:
    return CommitRecord(
        id=d["id"],
        parents=list(d["parents"]),
        author_name=d["authorName"],
        author_email=d["authorEmail"],
        author_date=int(d["authorDate"]),
        commit_date=int(d["commitDate"]),
        message=d["message"],
        file_changes=[
            FileChange(
                path=fc["path"],
                insertions=fc["insertions"],
                deletions=fc["deletions"],
                is_binary=bool(fc["isBinary"]),
            )
            for fc in d["fileChanges"]
        ],
        tags=list(d["tags"]),
        branch_heads=list(d["branchHeads"]),
        commit_type=d["commitType"],
        keywords=[(t, int(c)) for t, c in d["keywords"]],
    )


def _pr_to_dict(pr: PullRequest) -> dict:
    return {
        "number": pr.number,
        "title": pr.title,
        "body": pr.body,
        "state": pr.state.lower(),
        "merge_commit_sha": pr.merge_commit_id,
        "head_sha": pr.head_commit_id,
        "author": pr.author_name,
        "created_at": format_iso8601(pr.created_at),
        "merged_at": format_iso8601(pr.merged_at) if pr.merged_at is not None else None,
    }


def snapshot_to_dict(snap: AnalysisSnapshot) -> dict:
    return {
        "version": SNAPSHOT_VERSION,
        "repoId": snap.repo_id,
        "mainBranch": snap.main_branch,
        "commits": [_commit_to_dict(rec) for rec in snap.commits],
        "prs": [_pr_to_dict(pr) for pr in snap.prs],
        "releases": [
            {"version": r.version, "commitId": r.commit_id, "date": r.date}
            for r in snap.releases
        ],
    }


def snapshot_from_dict(data: dict) -> AnalysisSnapshot:
    if data.get("version") != SNAPSHOT_VERSION:
        raise GitStemError(f"unsupported snapshot version: {data.get('version')!r}")
    records = [_commit_from_dict(d) for d in data["commits"]]
    prs = parse_pr_dump(data.get("prs", []))
    releases = [
        Release(version=r["version"], commit_id=r["commitId"], date=int(r["date"]))
        for r in data.get("releases", [])
    ]
    return build_snapshot_from_records(
        repo_id=data.get("repoId", "repo"),
        records=records,
        prs=prs,
        releases=releases,
        main_branch=data.get("mainBranch", "master"),
        created_at=0,
    )


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def save_snapshot(snap: AnalysisSnapshot, path: str | Path) -> None:
    Path(path).write_text(dumps_canonical(snapshot_to_dict(snap)) + "\n", encoding="utf-8")


def load_snapshot(path: str | Path) -> AnalysisSnapshot:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GitStemError(f"cannot read snapshot {path}: {exc}") from None
    return snapshot_from_dict(data)
