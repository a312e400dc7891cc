from __future__ import annotations

import random

from gitstem.layout import LayoutNode, LayoutStemInput, compute_layout


def mk_stem(name, nodes, is_main=False):
    return LayoutStemInput(name=name, is_main=is_main, nodes=tuple(nodes))


def seq_nodes(prefix, dates, cluster="c1", start_topo=0, commit_count=1):
    return [
        LayoutNode(
            id=f"{prefix}{i}",
            date=d,
            topo=start_topo + i,
            commit_count=commit_count,
            cluster_id=cluster,
        )
        for i, d in enumerate(dates)
    ]


def random_view(seed):
    """Random stems with interleaved dates; first stem is main."""
    rng = random.Random(seed)
    n_stems = rng.randint(1, 6)
    stems = []
    topo = 0
    clock = 1_000
    for s in range(n_stems):
        n = rng.randint(1, 15)
        nodes = []
        cluster_no = 0
        for i in range(n):
            clock += rng.randint(0, 3)
            if i == 0 or rng.random() < 0.3:
                cluster_no += 1
            nodes.append(
                LayoutNode(
                    id=f"s{s}n{i}",
                    date=clock,
                    topo=topo,
                    commit_count=rng.randint(1, 4),
                    cluster_id=f"s{s}c{cluster_no}",
                    releases=("1.0.0",) if rng.random() < 0.05 else (),
                )
            )
            topo += 1
        stems.append(mk_stem(f"s{s}", nodes, is_main=(s == 0)))
    return stems


class TestBasics:
    def test_empty_view(self):
        model = compute_layout([])
        assert model.blocks == [] and model.column_count == 0 and model.row_count == 0

    def test_single_stem_single_cluster_single_block(self):
        nodes = seq_nodes("n", [1, 2, 3, 4], commit_count=2)
        model = compute_layout([mk_stem("master", nodes, is_main=True)])
        (block,) = model.blocks
        assert block.column == 0 and block.row == 0
        assert block.height == 8  # four nodes, two commits each
        assert model.strips["master"] == (0, 0)
        assert model.intra_stem_edges == []

    def test_alternating_stems_break_every_slot(self):
        a = seq_nodes("a", [0, 2, 4], cluster="ca", start_topo=0)
        b = seq_nodes("b", [1, 3, 5], cluster="cb", start_topo=10)
        model = compute_layout([mk_stem("master", a, is_main=True), mk_stem("other", b)])
        assert len(model.blocks) == 6
        assert sorted(b.column for b in model.blocks) == list(range(6))
        assert {blk.row for blk in model.blocks if blk.stem_name == "master"} == {0}
        assert {blk.row for blk in model.blocks if blk.stem_name == "other"} == {1}
        # master at even slots 0,2,4 -> columns 0,2,4
        master_cols = [blk.column for blk in model.blocks if blk.stem_name == "master"]
        assert master_cols == [0, 2, 4]

    def test_cluster_boundary_breaks_consecutive_run(self):
        nodes = seq_nodes("n", [1, 2], cluster="c1") + [
            LayoutNode(id="n2", date=3, topo=2, commit_count=1, cluster_id="c2")
        ]
        model = compute_layout([mk_stem("master", nodes, is_main=True)])
        assert [b.cluster_id for b in model.blocks] == ["c1", "c2"]
        assert [b.column for b in model.blocks] == [0, 1]
        # adjacent columns: no intra-stem edge
        assert model.intra_stem_edges == []

    def test_disjoint_spans_share_a_row(self):
        main = seq_nodes("m", [0, 10], cluster="cm")
        early = seq_nodes("e", [1, 2], cluster="ce", start_topo=10)
        late = seq_nodes("l", [11, 12], cluster="cl", start_topo=20)
        model = compute_layout(
            [mk_stem("master", main, is_main=True), mk_stem("early", early), mk_stem("late", late)]
        )
        assert model.row_assignments["early"] == model.row_assignments["late"] == 1
        assert model.row_count == 2

    def test_overlapping_spans_get_new_rows(self):
        main = seq_nodes("m", [0, 10], cluster="cm")
        s1 = seq_nodes("x", [1, 5], cluster="cx", start_topo=10)
        s2 = seq_nodes("y", [2, 6], cluster="cy", start_topo=20)
        model = compute_layout(
            [mk_stem("master", main, is_main=True), mk_stem("x", s1), mk_stem("y", s2)]
        )
        assert model.row_assignments["x"] != model.row_assignments["y"]
        assert 0 not in (model.row_assignments["x"], model.row_assignments["y"])

    def test_intra_stem_edge_for_gap(self):
        a = seq_nodes("a", [0, 4], cluster="ca")  # gap at slots 1..3
        b = seq_nodes("b", [1, 2, 3], cluster="cb", start_topo=10)
        model = compute_layout([mk_stem("master", a, is_main=True), mk_stem("other", b)])
        a_blocks = [blk for blk in model.blocks if blk.stem_name == "master"]
        assert len(a_blocks) == 2
        assert (a_blocks[0].id, a_blocks[1].id) in model.intra_stem_edges

    def test_release_markers(self):
        nodes = [
            LayoutNode(id="n0", date=0, topo=0, commit_count=1, cluster_id="c1"),
            LayoutNode(id="n1", date=1, topo=1, commit_count=1, cluster_id="c1",
                       releases=("1.0.0",)),
        ]
        model = compute_layout([mk_stem("master", nodes, is_main=True)])
        assert model.release_markers == [(0, "1.0.0")]
        assert model.blocks[0].release_tag == "1.0.0"

    def test_csm_base_flag_propagates(self):
        nodes = [
            LayoutNode(id="n0", date=0, topo=0, commit_count=3, cluster_id="c1",
                       is_csm_base=True)
        ]
        model = compute_layout([mk_stem("master", nodes, is_main=True)])
        assert model.blocks[0].has_csm_base is True

    def test_main_hidden_leaves_row_zero_empty(self):
        other = seq_nodes("o", [1, 2], cluster="co")
        model = compute_layout([mk_stem("other", other)])
        assert model.row_assignments["other"] == 1
        assert model.row_count == 2


class TestInvariants:
    def test_random_views(self):
        for seed in range(60):
            stems = random_view(seed)
            model = compute_layout(stems)

            # conservation of commit counts
            total = sum(n.commit_count for s in stems for n in s.nodes)
            assert sum(b.height for b in model.blocks) == total

            # (row, column) unique
            cells = [(b.row, b.column) for b in model.blocks]
            assert len(cells) == len(set(cells))

            # temporal consistency between stems
            for x in model.blocks:
                for y in model.blocks:
                    if x.stem_name != y.stem_name and x.last_slot < y.first_slot:
                        assert x.column < y.column

            # per-stem columns strictly increase with member order
            by_stem: dict[str, list] = {}
            for b in model.blocks:
                by_stem.setdefault(b.stem_name, []).append(b)
            for stem in stems:
                blocks = sorted(by_stem[stem.name], key=lambda b: b.first_slot)
                cols = [b.column for b in blocks]
                assert cols == sorted(cols)
                # member order inside the stem maps to block order
                flat = [nid for b in blocks for nid in b.member_ids]
                assert flat == [n.id for n in stem.nodes]

            # no two stems in one row overlap in columns
            spans: dict[int, list[tuple[int, int]]] = {}
            for name, (lo, hi) in model.strips.items():
                spans.setdefault(model.row_assignments[name], []).append((lo, hi))
            for intervals in spans.values():
                intervals.sort()
                for (lo1, hi1), (lo2, hi2) in zip(intervals, intervals[1:]):
                    assert hi1 < lo2

    def test_pure_function(self):
        stems = random_view(5)
        m1 = compute_layout(stems)
        m2 = compute_layout(stems)
        assert [(b.id, b.row, b.column, b.height) for b in m1.blocks] == [
            (b.id, b.row, b.column, b.height) for b in m2.blocks
        ]
