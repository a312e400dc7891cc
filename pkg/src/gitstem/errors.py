"""Exception types shared across the engine.

Every error raised on a bad input derives from GitStemError so the CLI and
the HTTP layer can map them to exit code 1 / a 4xx response in one place.
"""


class GitStemError(Exception):
    """Base class for all engine errors caused by input or parameters."""


class MalformedRecord(GitStemError):
    def __init__(self, line_no: int, detail: str = ""):
        self.line_no = line_no
        msg = f"malformed log record at line {line_no}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class EmptyCorpus(GitStemError):
    pass


class DuplicatePrNumber(GitStemError):
    def __init__(self, number: int):
        self.number = number
        super().__init__(f"duplicate pull request number {number}")


class CycleDetected(GitStemError):
    pass


class DanglingParent(GitStemError):
    def __init__(self, commit_id: str, parent_id: str):
        self.commit_id = commit_id
        self.parent_id = parent_id
        super().__init__(f"commit {commit_id} references unknown parent {parent_id}")


class UnknownMainBranch(GitStemError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"no branch head named {name!r}")


class NotAMerge(GitStemError):
    pass


class UnknownRepo(GitStemError):
    pass


class DuplicateRepo(GitStemError):
    pass


class UnknownCluster(GitStemError):
    def __init__(self, cluster_id: str):
        self.cluster_id = cluster_id
        super().__init__(f"unknown cluster {cluster_id!r}")


class UnknownSelection(GitStemError):
    pass


class EmptySelection(GitStemError):
    pass


class InvalidRange(GitStemError):
    pass


class EmptyKeyword(GitStemError):
    pass


class EmptyQuery(GitStemError):
    pass


class InvalidParams(GitStemError):
    pass
