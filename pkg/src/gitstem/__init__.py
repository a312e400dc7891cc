"""gitstem: a git history analysis engine.

Parses commit metadata, abstracts the DAG into first-parent stems, fuses
merged branches back into their merge commits with context preserved,
clusters similar neighbors, and serves layouts, summaries, diffs and search
for interactive exploration.
"""

from .clustering import Cluster, ClusterParams, Release, SimilarityWeights, similarity
from .csm import CsmNode, apply_csm, csm_sources, toggle_csm
from .errors import GitStemError
from .ingest import (
    CommitRecord,
    FileChange,
    PullRequest,
    classify_commit_type,
    parse_git_log,
)
from .keywords import extract_keywords
from .snapshot import AnalysisSnapshot, build_snapshot, load_snapshot, save_snapshot
from .stemgraph import CommitDag, Stem, build_dag, build_stems, order_stems
from .tfidf import TfIdfIndex, build_tfidf_index
from .views import View, ViewParams, derive_view

__version__ = "0.1.0"

__all__ = [
    "AnalysisSnapshot",
    "Cluster",
    "ClusterParams",
    "CommitDag",
    "CommitRecord",
    "CsmNode",
    "FileChange",
    "GitStemError",
    "PullRequest",
    "Release",
    "SimilarityWeights",
    "Stem",
    "TfIdfIndex",
    "View",
    "ViewParams",
    "apply_csm",
    "build_dag",
    "build_snapshot",
    "build_stems",
    "build_tfidf_index",
    "classify_commit_type",
    "csm_sources",
    "derive_view",
    "extract_keywords",
    "load_snapshot",
    "order_stems",
    "parse_git_log",
    "save_snapshot",
    "similarity",
    "toggle_csm",
    "__version__",
]
