from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from gitstem.clustering import (
    Aggregate,
    ClusterParams,
    SimilarityWeights,
    cluster_stem,
    date_similarity,
    detect_releases,
    non_conflict_cluster,
    similarity,
)
from gitstem.errors import InvalidParams
from gitstem.ingest import CommitRecord

from oracles import SimpleNode, oracle_cluster_pass, oracle_saw

DAY = 86400
EQUAL = SimilarityWeights(0.2, 0.2, 0.2, 0.2, 0.2)


def agg(authors=(), types=(), files=(), vector=None, dmin=0, dmax=0) -> Aggregate:
    return Aggregate(
        authors=frozenset(authors),
        types=frozenset(types),
        files=frozenset(files),
        vector=dict(vector or {}),
        date_min=dmin,
        date_max=dmax,
    )


def rand_aggregate(rng: random.Random) -> Aggregate:
    start = 1_600_000_000 + rng.randint(0, 400) * DAY
    return agg(
        authors=rng.sample(["a", "b", "c", "d", "e"], rng.randint(0, 3)),
        types=rng.sample(["Forward", "Corrective", "Management"], rng.randint(0, 2)),
        files=rng.sample([f"f{i}" for i in range(10)], rng.randint(0, 5)),
        vector={f"w{i}": rng.uniform(0.01, 3.0) for i in rng.sample(range(12), rng.randint(0, 6))},
        dmin=start,
        dmax=start + rng.randint(0, 30) * DAY,
    )


class TestSimilarity:
    def test_identical_aggregates_score_one(self):
        a = agg(["x"], ["Forward"], ["f"], {"w": 1.0}, 10, 20)
        assert similarity(a, a, EQUAL) == pytest.approx(1.0)

    def test_identical_empty_aggregates_score_one(self):
        a = agg()
        assert similarity(a, a, EQUAL) == pytest.approx(1.0)

    def test_fully_disjoint_same_day_scores_point_two(self):
        a = agg(["x"], ["Forward"], ["f1"], {"w1": 1.0}, 100, 100)
        b = agg(["y"], ["Corrective"], ["f2"], {"w2": 1.0}, 100, 100)
        assert similarity(a, b, EQUAL) == pytest.approx(0.2)

    def test_type_only_weighting(self):
        a = agg(["x"], ["Forward"], ["f1"], {"w1": 1.0}, 0, 0)
        b = agg(["y"], ["Forward"], ["f2"], {"w2": 1.0}, 400 * DAY, 400 * DAY)
        assert similarity(a, b, SimilarityWeights(0, 0, 1, 0, 0)) == pytest.approx(1.0)

    def test_matches_independent_oracle(self):
        rng = random.Random(42)
        for _ in range(300):
            a, b = rand_aggregate(rng), rand_aggregate(rng)
            weights = tuple(rng.uniform(0, 2) for _ in range(5))
            if sum(weights) == 0:
                continue
            w = SimilarityWeights(*weights)
            got = similarity(a, b, w, 365)
            want = oracle_saw(a, b, weights, 365)
            assert got == pytest.approx(want, abs=1e-9)

    def test_symmetric_and_bounded(self):
        rng = random.Random(7)
        for _ in range(200):
            a, b = rand_aggregate(rng), rand_aggregate(rng)
            s1 = similarity(a, b, EQUAL)
            s2 = similarity(b, a, EQUAL)
            assert s1 == pytest.approx(s2, abs=1e-12)
            assert 0.0 <= s1 <= 1.0

    @given(st.integers(min_value=0, max_value=10_000_000))
    def test_date_similarity_monotone_nonincreasing(self, gap):
        before = date_similarity(0, 0, gap, gap, 365)
        after = date_similarity(0, 0, gap + DAY, gap + DAY, 365)
        assert after <= before + 1e-12

    def test_date_similarity_endpoints(self):
        assert date_similarity(0, 10, 5, 20, 365) == 1.0  # overlap
        assert date_similarity(0, 0, 0, 0, 365) == 1.0
        assert date_similarity(0, 0, 365 * DAY, 365 * DAY, 365) == pytest.approx(0.0)
        assert date_similarity(0, 0, 1000 * DAY, 1000 * DAY, 365) == 0.0

    def test_weight_validation(self):
        with pytest.raises(InvalidParams):
            SimilarityWeights(-1, 0, 0, 0, 1).validate()
        with pytest.raises(InvalidParams):
            SimilarityWeights(0, 0, 0, 0, 0).validate()
        with pytest.raises(InvalidParams):
            ClusterParams(threshold=1.5).validate()


def node(i, authors, files=(), date=0, vector=None, types=("Forward",), releases=()):
    return SimpleNode(
        id=f"n{i}",
        authors=frozenset(authors),
        type_counts={t: 1 for t in types},
        files=frozenset(files),
        vector=dict(vector or {}),
        date_min=date,
        date_max=date,
        releases=tuple(releases),
    )


AUTHOR_ONLY = SimilarityWeights(1, 0, 0, 0, 0)


class TestClusterStem:
    def test_threshold_one_single_cluster(self):
        nodes = [node(i, [f"a{i}"], [f"f{i}"], i * DAY * 40) for i in range(8)]
        clusters = cluster_stem("s", nodes, ClusterParams(threshold=1.0))
        assert len(clusters) == 1
        assert clusters[0].members == [n.id for n in nodes]

    def test_threshold_zero_all_distinct_all_singletons(self):
        nodes = [node(i, [f"a{i}"], [f"f{i}"], i * DAY * 40) for i in range(8)]
        clusters = cluster_stem("s", nodes, ClusterParams(threshold=0.0))
        assert [c.members for c in clusters] == [[n.id] for n in nodes]

    def test_alternating_authors_matches_oracle(self):
        nodes = [node(i, ["ann"] if i % 2 == 0 else ["bob"]) for i in range(6)]
        params = ClusterParams(threshold=0.5, weights=AUTHOR_ONLY)
        clusters = cluster_stem("s", nodes, params)
        expected = oracle_cluster_pass(nodes, 0.5, (1, 0, 0, 0, 0))
        assert [c.members for c in clusters] == expected
        # authors alternate and never match: every node is its own cluster
        assert len(clusters) == 6

    def test_same_author_run_matches_oracle(self):
        nodes = [node(i, ["ann"]) for i in range(6)]
        params = ClusterParams(threshold=0.5, weights=AUTHOR_ONLY)
        clusters = cluster_stem("s", nodes, params)
        assert [c.members for c in clusters] == oracle_cluster_pass(nodes, 0.5, (1, 0, 0, 0, 0))
        assert len(clusters) == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_random_stems_match_oracle(self, seed):
        rng = random.Random(seed)
        nodes = []
        for i in range(rng.randint(2, 25)):
            nodes.append(
                SimpleNode(
                    id=f"n{i}",
                    authors=frozenset(rng.sample(["a", "b", "c"], rng.randint(1, 2))),
                    type_counts={rng.choice(["Forward", "Corrective"]): 1},
                    files=frozenset(rng.sample(["f1", "f2", "f3", "f4"], rng.randint(0, 3))),
                    vector={f"w{k}": rng.uniform(0.1, 1) for k in rng.sample(range(6), rng.randint(0, 3))},
                    date_min=1_600_000_000 + i * DAY,
                    date_max=1_600_000_000 + i * DAY,
                )
            )
        weights = tuple(rng.uniform(0, 1) for _ in range(5))
        if sum(weights) == 0:
            weights = (1, 1, 1, 1, 1)
        threshold = rng.random()
        clusters = cluster_stem("s", nodes, ClusterParams(threshold=threshold, weights=SimilarityWeights(*weights)))
        assert [c.members for c in clusters] == oracle_cluster_pass(nodes, threshold, weights)

    def test_release_tag_closes_cluster_when_split_on(self):
        nodes = [node(0, ["a"]), node(1, ["a"], releases=("1.0.0",)), node(2, ["a"])]
        params = ClusterParams(threshold=1.0, split_by_release=True)
        clusters = cluster_stem("s", nodes, params)
        assert [c.members for c in clusters] == [["n0", "n1"], ["n2"]]
        assert clusters[0].release_tag == "1.0.0"
        assert clusters[1].release_tag is None

    def test_release_ignored_when_split_off(self):
        nodes = [node(0, ["a"]), node(1, ["a"], releases=("1.0.0",)), node(2, ["a"])]
        clusters = cluster_stem("s", nodes, ClusterParams(threshold=1.0))
        assert len(clusters) == 1
        assert clusters[0].release_tag == "1.0.0"

    def test_monotone_cluster_counts(self):
        rng = random.Random(99)
        for _ in range(20):
            nodes = [
                node(
                    i,
                    rng.sample(["a", "b", "c"], rng.randint(1, 2)),
                    rng.sample(["f1", "f2"], rng.randint(0, 2)),
                    date=1_600_000_000 + i * rng.randint(0, 3) * DAY,
                    vector={f"w{k}": 1.0 for k in rng.sample(range(4), rng.randint(0, 2))},
                )
                for i in range(rng.randint(2, 30))
            ]
            counts = [
                len(cluster_stem("s", nodes, ClusterParams(threshold=k / 10)))
                for k in range(11)
            ]
            assert counts == sorted(counts, reverse=True)
            assert counts[-1] == 1

    def test_cluster_ids_stable_and_aggregates_conserve(self):
        nodes = [node(i, ["a"], [f"f{i}"], i * DAY) for i in range(5)]
        params = ClusterParams(threshold=0.4)
        a = cluster_stem("s", nodes, params)
        b = cluster_stem("s", nodes, params)
        assert [c.id for c in a] == [c.id for c in b]
        members = [m for c in a for m in c.members]
        assert members == [n.id for n in nodes]
        for c in a:
            assert c.commit_count >= len(c.members)


class TestNonConflict:
    def _three(self, files_a, files_b, files_c, authors=("x",)):
        nodes = [
            node(0, authors, files_a, 0),
            node(1, ["zz"], files_b, DAY),
            node(2, authors, files_c, 2 * DAY),
        ]
        clusters = cluster_stem("s", nodes, ClusterParams(threshold=0.0, weights=AUTHOR_ONLY))
        assert len(clusters) == 3
        return clusters

    def test_merges_over_nonconflicting_intermediate(self):
        clusters = self._three(["f1"], ["f2"], ["f1"])
        params = ClusterParams(threshold=0.0, weights=AUTHOR_ONLY)
        out = non_conflict_cluster(clusters, params)
        assert [c.members for c in out] == [["n0", "n2"], ["n1"]]
        assert out[0].files == {"f1"}

    def test_blocking_intermediate_prevents_merge(self):
        clusters = self._three(["f1", "shared"], ["shared"], ["f1", "shared"])
        params = ClusterParams(threshold=0.0, weights=AUTHOR_ONLY)
        out = non_conflict_cluster(clusters, params)
        assert [c.members for c in out] == [["n0"], ["n1"], ["n2"]]

    def test_threshold_zero_nonidentical_unchanged(self):
        clusters = self._three(["f1"], ["f2"], ["f3"], authors=("x",))
        # candidate differs from anchor by author now
        clusters[2].authors = {"other"}
        params = ClusterParams(threshold=0.0, weights=AUTHOR_ONLY)
        out = non_conflict_cluster(clusters, params)
        assert [c.members for c in out] == [["n0"], ["n1"], ["n2"]]

    def test_events_record_merge_context(self):
        clusters = self._three(["f1"], ["f2"], ["f1"])
        params = ClusterParams(threshold=0.0, weights=AUTHOR_ONLY)
        events: list = []
        non_conflict_cluster(clusters, params, events=events)
        ((anchor_id, cand_id, between, anchor_files),) = events
        assert anchor_id == clusters[0].id and cand_id == clusters[2].id
        assert [b_id for b_id, _ in between] == [clusters[1].id]
        assert anchor_files == frozenset({"f1"})

    def test_input_clusters_not_mutated(self):
        clusters = self._three(["f1"], ["f2"], ["f1"])
        before = [list(c.members) for c in clusters]
        non_conflict_cluster(clusters, ClusterParams(threshold=0.0, weights=AUTHOR_ONLY))
        assert [list(c.members) for c in clusters] == before


def _commit(cid, date):
    return CommitRecord(
        id=cid, parents=[], author_name="a", author_email="a@e",
        author_date=date, commit_date=date, message="m",
    )


class TestDetectReleases:
    C1 = "1".ljust(40, "0")
    C2 = "2".ljust(40, "0")

    def test_semver_tag_detected(self):
        commits = {self.C1: _commit(self.C1, 100)}
        assert [(r.version, r.commit_id) for r in detect_releases([("v1.2.0", self.C1)], commits)] == [
            ("1.2.0", self.C1)
        ]

    def test_non_semver_ignored(self):
        commits = {self.C1: _commit(self.C1, 100)}
        assert detect_releases([("nightly", self.C1), ("v1.2", self.C1)], commits) == []

    def test_sorted_by_commit_date(self):
        commits = {self.C1: _commit(self.C1, 100), self.C2: _commit(self.C2, 200)}
        tags = [("v1.0.0", self.C2), ("0.9.0", self.C1)]
        assert [r.version for r in detect_releases(tags, commits)] == ["0.9.0", "1.0.0"]
