"""TF-IDF index over commit messages.

One document per commit.  tf is the raw token count in the message, idf is
ln(N / df) with no smoothing, and df counts document presence.  Vectors are
sparse dicts holding only nonzero weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EmptyCorpus
from .ingest import CommitRecord


@dataclass
class TfIdfIndex:
    document_count: int
    document_frequency: dict[str, int] = field(default_factory=dict)
    per_commit_vector: dict[str, dict[str, float]] = field(default_factory=dict)

    def idf(self, token: str) -> float:
        # Unseen tokens (e.g. from fused PR text) fall back to df = 1.
        df = self.document_frequency.get(token, 1)
        return math.log(self.document_count / df)

    def vector_for(
        self, keyword_counts: list[tuple[str, int]] | dict[str, int]
    ) -> dict[str, float]:
        """Sparse tf·idf vector for an arbitrary keyword-count bag."""
        items = keyword_counts.items() if isinstance(keyword_counts, dict) else keyword_counts
        vec: dict[str, float] = {}
        for token, count in items:
            w = count * self.idf(token)
            if w != 0.0:
                vec[token] = w
        return vec

    def weight(self, commit_id: str, token: str) -> float:
        return self.per_commit_vector.get(commit_id, {}).get(token, 0.0)


def build_tfidf_index(commits: list[CommitRecord]) -> TfIdfIndex:
    """Build the index; requires keywords to be populated on every commit."""
    if not commits:
        raise EmptyCorpus("cannot build a TF-IDF index over zero commits")
    df: dict[str, int] = {}
    for rec in commits:
        for token, _count in rec.keywords:
            df[token] = df.get(token, 0) + 1
    index = TfIdfIndex(document_count=len(commits), document_frequency=df)
    for rec in commits:
        index.per_commit_vector[rec.id] = index.vector_for(rec.keywords)
    return index


def cosine(a: dict[str, float], b: dict[str, float]) -> float:
    """Cosine similarity of sparse vectors.

    Two empty vectors count as identical (1.0); one empty vector against a
    nonzero one is 0.0, matching how empty sets behave under Jaccard.
    """
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(w * b[t] for t, w in a.items() if t in b)
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 1.0 if norm_a == norm_b else 0.0
    return dot / (norm_a * norm_b)
