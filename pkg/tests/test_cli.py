from __future__ import annotations

import json

import pytest

from gitstem.cli import main
from gitstem.snapshot import load_snapshot

from conftest import requires_git


@pytest.fixture()
def fixture_files(tmp_path, synthetic_small):
    log = tmp_path / "history.log"
    log.write_text(synthetic_small.log_text, encoding="utf-8")
    prs = tmp_path / "prs.json"
    prs.write_text(json.dumps(synthetic_small.pr_entries), encoding="utf-8")
    tags = tmp_path / "tags.txt"
    tags.write_text(synthetic_small.tag_text, encoding="utf-8")
    return log, prs, tags


class TestIngest:
    def test_empty_log_exits_one(self, tmp_path, capsys):
        empty = tmp_path / "empty.log"
        empty.write_text("", encoding="utf-8")
        code = main(["ingest", "--log", str(empty), "--out", str(tmp_path / "s.json")])
        assert code == 1
        assert "no commits" in capsys.readouterr().err

    def test_ingest_log_dump(self, tmp_path, fixture_files, synthetic_small):
        log, prs, tags = fixture_files
        out = tmp_path / "snap.json"
        code = main(
            ["ingest", "--log", str(log), "--pr", str(prs), "--tags", str(tags),
             "--out", str(out)]
        )
        assert code == 0
        snap = load_snapshot(out)
        assert snap.commit_count == len(synthetic_small.records)
        assert snap.releases

    @requires_git
    def test_ingest_real_repo_linear(self, tmp_path, linear_repo):
        out = tmp_path / "s.json"
        code = main(["ingest", "--repo", str(linear_repo.path), "--out", str(out)])
        assert code == 0
        snap = load_snapshot(out)
        assert len(snap.raw_stems) == 1
        assert snap.raw_stems[0].stem_type == "Main"

    @requires_git
    def test_git_bin_override(self, tmp_path, linear_repo, monkeypatch, capsys):
        monkeypatch.setenv("GITHRU_GIT_BIN", "/nonexistent/git")
        code = main(["ingest", "--repo", str(linear_repo.path), "--out", str(tmp_path / "s.json")])
        assert code == 1
        assert "git" in capsys.readouterr().err

    def test_missing_log_file(self, tmp_path, capsys):
        code = main(["ingest", "--log", str(tmp_path / "gone.log"), "--out", str(tmp_path / "s.json")])
        assert code == 1


class TestExport:
    def test_threshold_one_single_cluster_per_stem(self, tmp_path, fixture_files):
        log, prs, tags = fixture_files
        snap_path = tmp_path / "snap.json"
        assert main(["ingest", "--log", str(log), "--pr", str(prs), "--tags", str(tags),
                     "--out", str(snap_path)]) == 0
        out = tmp_path / "graph.json"
        assert main(["export", "--snapshot", str(snap_path), "--threshold", "1",
                     "--format", "json", "--out", str(out)]) == 0
        body = json.loads(out.read_text(encoding="utf-8"))
        per_stem: dict[str, int] = {}
        for c in body["clusters"]:
            per_stem[c["stemName"]] = per_stem.get(c["stemName"], 0) + 1
        assert all(v == 1 for v in per_stem.values())
        assert {s["name"] for s in body["stems"]} == set(per_stem)

    def test_ingest_export_deterministic(self, tmp_path, fixture_files):
        log, prs, tags = fixture_files
        outputs = []
        for run in ("one", "two"):
            snap_path = tmp_path / f"snap-{run}.json"
            graph_path = tmp_path / f"graph-{run}.json"
            assert main(["ingest", "--log", str(log), "--pr", str(prs), "--tags",
                         str(tags), "--out", str(snap_path)]) == 0
            assert main(["export", "--snapshot", str(snap_path), "--threshold", "0.5",
                         "--weights", "1,1,2,1,0.5", "--release-split", "true",
                         "--out", str(graph_path)]) == 0
            outputs.append((snap_path.read_bytes(), graph_path.read_bytes()))
        assert outputs[0] == outputs[1]

    def test_bad_weights_exit_one(self, tmp_path, fixture_files, capsys):
        log, _, _ = fixture_files
        snap_path = tmp_path / "snap.json"
        main(["ingest", "--log", str(log), "--out", str(snap_path)])
        assert main(["export", "--snapshot", str(snap_path), "--weights", "1,2"]) == 1
        assert main(["export", "--snapshot", str(snap_path), "--weights", "0,0,0,0,0"]) == 1

    def test_missing_snapshot_exit_one(self, tmp_path):
        assert main(["export", "--snapshot", str(tmp_path / "none.json")]) == 1
