"""Raw repository metadata ingestion.

Turns `git log` output (a pinned, sentinel-delimited format), a tag list and
an optional pull-request dump into typed records.  The pinned log command is:

    git log --all --date-order \
        --pretty=format:"§§%H§%P§%an§%ae§%ad§%cd§%D§%B" \
        --date=unix --numstat

"§§" starts a record, "§" separates fields, and the message (%B) is the last
field so it may span lines.  Numstat lines trail each record after one blank
separator line, which is how message lines that merely look like numstat are
told apart from the real thing.
"""

from __future__ import annotations

import os
import re
import subprocess
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import DuplicatePrNumber, GitStemError, MalformedRecord
from .keywords import tokenize

SENTINEL = "§"

_RECORD_START_RE = re.compile(r"^§§[0-9a-f]{40}§")
_NUMSTAT_RE = re.compile(r"^(\d+|-)\t(\d+|-)\t(.+)$")
_HEX_ID_RE = re.compile(r"^[0-9a-f]{40}$")

GIT_BIN_ENV = "GITHRU_GIT_BIN"

LOG_FORMAT = (
    "§§%H§%P§%an§%ae§%ad§%cd§%D§%B"
)
LOG_ARGS = [
    "log",
    "--all",
    "--date-order",
    f"--pretty=format:{LOG_FORMAT}",
    "--date=unix",
    "--numstat",
]
TAG_ARGS = ["tag", "--format=%(refname:short) %(objectname)"]

# Commit classification: first matching category wins, in this order.
COMMIT_TYPES = ("Corrective", "Forward", "Reengineering", "Management")

TYPE_KEYWORDS: dict[str, frozenset[str]] = {
    "Corrective": frozenset(
        {"fix", "bug", "crash", "error", "fail", "repair", "patch", "defect", "issue"}
    ),
    "Forward": frozenset(
        {"add", "implement", "feature", "create", "introduce", "support", "new"}
    ),
    "Reengineering": frozenset(
        {
            "refactor",
            "clean",
            "cleanup",
            "rename",
            "move",
            "restructure",
            "optimize",
            "simplify",
        }
    ),
    "Management": frozenset(
        {
            "merge",
            "release",
            "version",
            "doc",
            "docs",
            "readme",
            "license",
            "changelog",
            "format",
            "typo",
        }
    ),
}


@dataclass
class FileChange:
    path: str
    insertions: int | None  # None when git reports "-" (binary content)
    deletions: int | None
    is_binary: bool = False

    @property
    def cloc(self) -> int:
        return (self.insertions or 0) + (self.deletions or 0)


@dataclass
class CommitRecord:
    id: str
    parents: list[str]
    author_name: str
    author_email: str
    author_date: int
    commit_date: int
    message: str
    file_changes: list[FileChange] = field(default_factory=list)
    tags: list[str] = field(default_factory=list)
    branch_heads: list[str] = field(default_factory=list)
    commit_type: str = ""  # populated by classify pass
    keywords: list[tuple[str, int]] = field(default_factory=list)

    @property
    def cloc(self) -> int:
        return sum(fc.cloc for fc in self.file_changes)

    @property
    def is_merge(self) -> bool:
        return len(self.parents) >= 2


@dataclass
class PullRequest:
    number: int
    title: str
    body: str
    state: str  # Open | Closed | Merged
    merge_commit_id: str | None
    head_commit_id: str | None
    author_name: str
    created_at: int
    merged_at: int | None


def classify_commit_type(message: str) -> str:
    """Single deterministic label from the keyword tables; Management fallback."""
    tokens = set(tokenize(message))
    for type_name in COMMIT_TYPES:
        if tokens & TYPE_KEYWORDS[type_name]:
            return type_name
    return "Management"


def _parse_decorations(refs: str) -> tuple[list[str], list[str]]:
    """Split a %D decoration string into (branch names, tag names)."""
    branches: list[str] = []
    tags: list[str] = []
    for part in refs.split(","):
        part = part.strip()
        if not part:
            continue
        if part.startswith("HEAD -> "):
            part = part[len("HEAD -> ") :]
        if part == "HEAD":
            continue
        if part.startswith("tag: "):
            tags.append(part[len("tag: ") :])
        else:
            branches.append(part)
    return branches, tags


def parse_git_log(raw_log: str) -> list[CommitRecord]:
    """Parse pinned-format log text into commit records, in log order.

    Raises MalformedRecord when a record header does not follow the pinned
    shape.  Unknown parent ids are left as-is; they are resolved (or rejected)
    when the DAG is built.
    """
    if not raw_log.strip():
        return []
    lines = raw_log.split("\n")
    starts = [i for i, line in enumerate(lines) if _RECORD_START_RE.match(line)]
    if not starts:
        raise MalformedRecord(1, "no record sentinel found")
    if lines[: starts[0]] and any(s.strip() for s in lines[: starts[0]]):
        raise MalformedRecord(1, "content before first record")
    records: list[CommitRecord] = []
    for idx, start in enumerate(starts):
        end = starts[idx + 1] if idx + 1 < len(starts) else len(lines)
        records.append(_parse_record(lines[start:end], start + 1))
    return records


def _parse_record(chunk: list[str], line_no: int) -> CommitRecord:
    body = list(chunk)
    while body and body[-1] == "":
        body.pop()

    numstat_start = len(body)
    while numstat_start > 0 and _NUMSTAT_RE.match(body[numstat_start - 1]):
        numstat_start -= 1
    # Real numstat is always preceded by one blank separator line; a trailing
    # message line that merely looks like numstat is not.
    if numstat_start < len(body) and (
        numstat_start == 0 or body[numstat_start - 1] != ""
    ):
        numstat_start = len(body)

    numstat_lines = body[numstat_start:]
    header_lines = body[:numstat_start]
    if numstat_lines and header_lines and header_lines[-1] == "":
        header_lines = header_lines[:-1]

    header = "\n".join(header_lines)
    fields = header[2:].split(SENTINEL, 7)
    if len(fields) != 8:
        raise MalformedRecord(line_no, "expected 8 fields")
    commit_id, parents_str, author_name, author_email, ad, cd, refs, message = fields
    if not _HEX_ID_RE.match(commit_id):
        raise MalformedRecord(line_no, "bad commit id")
    parents = parents_str.split() if parents_str.strip() else []
    if any(not _HEX_ID_RE.match(p) for p in parents):
        raise MalformedRecord(line_no, "bad parent id")
    try:
        author_date = int(ad)
        commit_date = int(cd)
    except ValueError:
        raise MalformedRecord(line_no, "bad date") from None

    file_changes = []
    for ns in numstat_lines:
        m = _NUMSTAT_RE.match(ns)
        assert m is not None
        ins_s, del_s, path = m.groups()
        if ins_s == "-" or del_s == "-":
            file_changes.append(FileChange(path, None, None, is_binary=True))
        else:
            file_changes.append(FileChange(path, int(ins_s), int(del_s)))

    branches, tags = _parse_decorations(refs)
    return CommitRecord(
        id=commit_id,
        parents=parents,
        author_name=author_name,
        author_email=author_email,
        author_date=author_date,
        commit_date=commit_date,
        message=message.rstrip("\n"),
        file_changes=file_changes,
        tags=tags,
        branch_heads=branches,
    )


def parse_tag_list(text: str) -> list[tuple[str, str]]:
    """Parse `git tag --format="%(refname:short) %(objectname)"` output."""
    out: list[tuple[str, str]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        name, _, obj = line.rpartition(" ")
        if name and _HEX_ID_RE.match(obj):
            out.append((name, obj))
    return out


def _parse_iso8601(value: str) -> int:
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def format_iso8601(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_pr_dump(entries: list[dict]) -> list[PullRequest]:
    """Load pull requests from the dump format (a JSON array of objects).

    Field names follow the public API subset: number, title, body, state
    ("open"|"closed"|"merged"), merge_commit_sha, head_sha, author,
    created_at, merged_at.
    """
    prs: list[PullRequest] = []
    seen: set[int] = set()
    for entry in entries:
        try:
            number = int(entry["number"])
            state_raw = str(entry["state"]).lower()
        except (KeyError, TypeError, ValueError) as exc:
            raise GitStemError(f"malformed pull request entry: {exc}") from None
        if number in seen:
            raise DuplicatePrNumber(number)
        seen.add(number)
        if state_raw not in ("open", "closed", "merged"):
            raise GitStemError(f"pull request #{number}: bad state {state_raw!r}")
        merged_at = entry.get("merged_at")
        prs.append(
            PullRequest(
                number=number,
                title=str(entry.get("title", "")),
                body=str(entry.get("body") or ""),
                state=state_raw.capitalize(),
                merge_commit_id=entry.get("merge_commit_sha") or None,
                head_commit_id=entry.get("head_sha") or None,
                author_name=str(entry.get("author", "")),
                created_at=_parse_iso8601(entry["created_at"])
                if entry.get("created_at")
                else 0,
                merged_at=_parse_iso8601(merged_at) if merged_at else None,
            )
        )
    return prs


@dataclass
class PrLinks:
    """Resolved PR ↔ commit links plus any degradation warnings."""

    merged_by_commit: dict[str, list[int]] = field(default_factory=dict)
    head_to_pr: dict[str, int] = field(default_factory=dict)
    by_number: dict[int, PullRequest] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def attach_pull_requests(
    commits_by_id: dict[str, CommitRecord], prs: list[PullRequest]
) -> PrLinks:
    """Link PRs to commits; unresolvable links become warnings, never errors."""
    links = PrLinks()
    for pr in prs:
        if pr.number in links.by_number:
            raise DuplicatePrNumber(pr.number)
        links.by_number[pr.number] = pr
        if pr.state == "Merged":
            if pr.merge_commit_id is None:
                links.warnings.append(
                    f"PR #{pr.number} is merged but has no merge commit"
                )
            elif pr.merge_commit_id not in commits_by_id:
                links.warnings.append(
                    f"PR #{pr.number}: merge commit {pr.merge_commit_id} not found"
                )
            else:
                links.merged_by_commit.setdefault(pr.merge_commit_id, []).append(
                    pr.number
                )
        if pr.head_commit_id is not None:
            if pr.head_commit_id in commits_by_id:
                # first PR wins when several share a head
                links.head_to_pr.setdefault(pr.head_commit_id, pr.number)
            else:
                links.warnings.append(
                    f"PR #{pr.number}: head commit {pr.head_commit_id} not found"
                )
    for nums in links.merged_by_commit.values():
        nums.sort()
    return links


def git_binary() -> str:
    return os.environ.get(GIT_BIN_ENV) or "git"


def run_git_log(repo_path: str) -> str:
    return _run_git(repo_path, LOG_ARGS)


def run_git_tags(repo_path: str) -> str:
    return _run_git(repo_path, TAG_ARGS)


def _run_git(repo_path: str, args: list[str]) -> str:
    cmd = [git_binary(), "-C", repo_path] + args
    try:
        proc = subprocess.run(
            cmd,
            capture_output=True,
            check=True,
            encoding="utf-8",
            errors="replace",
        )
    except FileNotFoundError:
        raise GitStemError(f"git executable not found: {cmd[0]}") from None
    except subprocess.CalledProcessError as exc:
        raise GitStemError(
            f"git failed ({exc.returncode}): {exc.stderr.strip()}"
        ) from None
    return proc.stdout
