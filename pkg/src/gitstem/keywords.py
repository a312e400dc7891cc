"""Commit-message tokenization and keyword extraction.

Messages are lowercased and split on non-alphanumeric boundaries.  Keyword
extraction then drops stop words and enumeration noise: pure numbers and
single characters (which also covers list markers such as "1.", "-" or "*",
since those never survive tokenization intact).
"""

from __future__ import annotations

import re
from collections import Counter
from importlib import resources
from pathlib import Path

_TOKEN_RE = re.compile(r"[0-9a-z]+")


def _load_stopwords(path: Path | None = None) -> frozenset[str]:
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
    else:
        text = (
            resources.files("gitstem")
            .joinpath("data/stopwords.txt")
            .read_text(encoding="utf-8")
        )
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)


STOP_WORDS: frozenset[str] = _load_stopwords()


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric tokens, in order of appearance."""
    return _TOKEN_RE.findall(text.lower())


def extract_keywords(
    message: str, stop_words: frozenset[str] | None = None
) -> list[tuple[str, int]]:
    """Aggregate keyword counts for one message.

    Returns (token, count) pairs in first-occurrence order.  Stop words,
    pure numbers and single-character tokens are discarded.
    """
    stop = STOP_WORDS if stop_words is None else stop_words
    counts: Counter[str] = Counter()
    for tok in tokenize(message):
        if len(tok) < 2 or tok.isdigit() or tok in stop:
            continue
        counts[tok] += 1
    return list(counts.items())
