from __future__ import annotations

import shutil
import subprocess
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixturegen import synth_history  # noqa: E402

GIT = shutil.which("git")

requires_git = pytest.mark.skipif(GIT is None, reason="git executable not available")


class RepoBuilder:
    """Drive a real git repository with controlled dates."""

    def __init__(self, path: Path):
        self.path = path
        self.clock = 1_600_000_000
        path.mkdir(parents=True, exist_ok=True)
        self.git("init", "-q", "-b", "master")
        self.git("config", "user.name", "Test Author")
        self.git("config", "user.email", "test@example.com")

    def git(self, *args: str, env: dict | None = None) -> str:
        import os

        full_env = dict(os.environ)
        if env:
            full_env.update(env)
        proc = subprocess.run(
            [GIT, "-C", str(self.path), *args],
            capture_output=True,
            check=True,
            encoding="utf-8",
            env=full_env,
        )
        return proc.stdout

    def commit(self, message: str, files: dict[str, bytes | str] | None = None,
               author: str | None = None) -> str:
        for name, content in (files or {"notes.txt": message + "\n"}).items():
            target = self.path / name
            target.parent.mkdir(parents=True, exist_ok=True)
            if isinstance(content, bytes):
                target.write_bytes(content)
            else:
                target.write_text(content, encoding="utf-8")
        self.git("add", "-A")
        self.clock += 100
        env = {
            "GIT_AUTHOR_DATE": f"{self.clock} +0000",
            "GIT_COMMITTER_DATE": f"{self.clock} +0000",
        }
        if author:
            env["GIT_AUTHOR_NAME"] = author
            env["GIT_AUTHOR_EMAIL"] = author.lower().replace(" ", ".") + "@example.com"
        self.git("commit", "-q", "--allow-empty", "-m", message, env=env)
        return self.git("rev-parse", "HEAD").strip()

    def merge(self, *branches: str, message: str = "merge") -> str:
        self.clock += 100
        env = {
            "GIT_AUTHOR_DATE": f"{self.clock} +0000",
            "GIT_COMMITTER_DATE": f"{self.clock} +0000",
        }
        self.git("merge", "-q", "--no-ff", "--no-edit", "-m", message, *branches, env=env)
        return self.git("rev-parse", "HEAD").strip()

    def first_parent_ids(self, ref: str = "master") -> list[str]:
        out = self.git("log", "--first-parent", "--pretty=%H", ref)
        return out.split()


@pytest.fixture(scope="session")
def linear_repo(tmp_path_factory) -> RepoBuilder:
    repo = RepoBuilder(tmp_path_factory.mktemp("linear"))
    repo.commit("initial commit", {"a.txt": "one\n"})
    repo.commit("add parser module", {"src/parser.c": "int parse;\n"})
    repo.commit("fix parser crash", {"src/parser.c": "int parse2;\n"})
    return repo


@pytest.fixture(scope="session")
def merge_repo(tmp_path_factory) -> RepoBuilder:
    """master with one merged branch (ref deleted) and one live branch."""
    repo = RepoBuilder(tmp_path_factory.mktemp("merge"))
    repo.commit("initial commit", {"a.txt": "one\n"})
    repo.git("checkout", "-q", "-b", "topic")
    repo.commit("implement topic feature", {"topic.txt": "t\n"}, author="Brin Cole")
    repo.commit("cleanup topic code", {"topic.txt": "t2\n"}, author="Brin Cole")
    repo.git("checkout", "-q", "master")
    repo.commit("add mainline work", {"b.txt": "two\n"})
    repo.merge("topic", message="merge topic branch")
    repo.git("branch", "-q", "-D", "topic")
    repo.git("checkout", "-q", "-b", "live")
    repo.commit("introduce live work", {"live.txt": "l\n"}, author="Chen Wu")
    repo.git("checkout", "-q", "master")
    repo.commit("fix last bug", {"a.txt": "three\n"})
    repo.git("tag", "v1.0.0")
    return repo


@pytest.fixture(scope="session")
def binary_repo(tmp_path_factory) -> RepoBuilder:
    repo = RepoBuilder(tmp_path_factory.mktemp("binary"))
    repo.commit("initial commit", {"a.txt": "one\ntwo\n"})
    repo.commit("add binary logo", {"assets/logo.png": b"PNG\x00\x01\x02\x00DATA"})
    return repo


@pytest.fixture(scope="session")
def octopus_repo(tmp_path_factory) -> RepoBuilder:
    repo = RepoBuilder(tmp_path_factory.mktemp("octopus"))
    repo.commit("initial commit", {"a.txt": "one\n"})
    repo.git("checkout", "-q", "-b", "left")
    repo.commit("add left part", {"left.txt": "l\n"})
    repo.git("checkout", "-q", "master")
    repo.git("checkout", "-q", "-b", "right")
    repo.commit("add right part", {"right.txt": "r\n"})
    repo.git("checkout", "-q", "master")
    repo.commit("mainline step", {"a.txt": "two\n"})
    repo.merge("left", "right", message="merge left and right")
    repo.git("branch", "-q", "-D", "left")
    repo.git("branch", "-q", "-D", "right")
    return repo


@pytest.fixture(scope="session")
def synthetic_small():
    return synth_history(seed=11, n_commits=80, n_branches=8, n_releases=3, n_prs=4)


@pytest.fixture(scope="session")
def synthetic_large():
    return synth_history(seed=7, n_commits=1000, n_branches=30, n_releases=5, n_prs=10)
