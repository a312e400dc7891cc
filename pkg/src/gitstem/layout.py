"""Stem-graph geometry, emitted as plain data.

Every node gets a global time slot; per stem, runs of consecutive slots that
stay inside one cluster become blocks; blocks are squeezed into dense
columns; stems are packed into rows so that non-overlapping column spans can
share one.  Pixel sizes, colors and cluster outlines are renderer concerns
and deliberately absent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


@dataclass(frozen=True)
class LayoutNode:
    id: str
    date: int
    topo: int
    commit_count: int
    cluster_id: str
    is_csm_base: bool = False
    releases: tuple[str, ...] = ()


@dataclass(frozen=True)
class LayoutStemInput:
    name: str
    is_main: bool
    nodes: tuple[LayoutNode, ...]


@dataclass
class Block:
    id: str
    cluster_id: str
    stem_name: str
    row: int
    column: int
    height: int  # commit count including CSM sources
    has_csm_base: bool
    release_tag: str | None
    member_ids: list[str]
    first_slot: int
    last_slot: int


@dataclass
class LayoutModel:
    blocks: list[Block] = field(default_factory=list)
    row_assignments: dict[str, int] = field(default_factory=dict)
    intra_stem_edges: list[tuple[str, str]] = field(default_factory=list)
    strips: dict[str, tuple[int, int]] = field(default_factory=dict)
    release_markers: list[tuple[int, str]] = field(default_factory=list)
    column_count: int = 0
    row_count: int = 0
    slot_of: dict[str, int] = field(default_factory=dict)
    block_of_node: dict[str, str] = field(default_factory=dict)


def compute_layout(stems: Sequence[LayoutStemInput]) -> LayoutModel:
    """Pure function from clustered stems to grid geometry.

    Assumes each stem's nodes arrive in stem (ancestor-first) order and that
    dates never decrease along a chain, which holds up to clock skew.
    """
    model = LayoutModel()
    all_nodes = [(node, stem.name) for stem in stems for node in stem.nodes]
    if not all_nodes:
        return model

    all_nodes.sort(key=lambda pair: (pair[0].date, pair[0].topo, pair[0].id))
    slot_of = {node.id: i for i, (node, _) in enumerate(all_nodes)}
    model.slot_of = slot_of

    # Group each stem's nodes into runs of consecutive slots within one
    # cluster; a slot owned by another stem or a cluster boundary breaks runs.
    raw_blocks: list[tuple[str, list[LayoutNode]]] = []
    for stem in stems:
        run: list[LayoutNode] = []
        for node in stem.nodes:
            if run and (
                slot_of[node.id] != slot_of[run[-1].id] + 1
                or node.cluster_id != run[-1].cluster_id
            ):
                raw_blocks.append((stem.name, run))
                run = []
            run.append(node)
        if run:
            raw_blocks.append((stem.name, run))

    raw_blocks.sort(key=lambda item: slot_of[item[1][0].id])

    rows: dict[str, int] = {}
    row_spans: list[list[tuple[int, int]]] = []  # per row, occupied intervals

    # Column spans are needed before rows can be packed; compute both in two
    # passes over the squeezed blocks.
    stem_cols: dict[str, list[int]] = {}
    squeezed: list[tuple[str, list[LayoutNode], int]] = []
    for column, (stem_name, run) in enumerate(raw_blocks):
        squeezed.append((stem_name, run, column))
        stem_cols.setdefault(stem_name, []).append(column)

    def place(stem_name: str, start_row: int) -> int:
        cols = stem_cols[stem_name]
        span = (cols[0], cols[-1])
        for row_idx in range(start_row, len(row_spans)):
            if all(span[1] < lo or hi < span[0] for lo, hi in row_spans[row_idx]):
                row_spans[row_idx].append(span)
                return row_idx
        new_row = max(start_row, len(row_spans))
        while len(row_spans) <= new_row:
            row_spans.append([])
        row_spans[new_row].append(span)
        return new_row

    # Row 0 belongs to the main stem exclusively; everyone else packs into
    # rows >= 1 first-fit by column span.
    row_spans.append([])
    for stem in stems:
        if stem.is_main and stem.nodes:
            rows[stem.name] = 0
            break
    for stem in stems:
        if stem.is_main or not stem.nodes:
            continue
        rows[stem.name] = place(stem.name, 1)
    model.row_assignments = rows

    for stem_name, run, column in squeezed:
        release_tag = None
        for node in run:
            if node.releases:
                release_tag = node.releases[-1]
                for version in node.releases:
                    model.release_markers.append((column, version))
        block = Block(
            id=f"b{column}",
            cluster_id=run[0].cluster_id,
            stem_name=stem_name,
            row=rows[stem_name],
            column=column,
            height=sum(n.commit_count for n in run),
            has_csm_base=any(n.is_csm_base for n in run),
            release_tag=release_tag,
            member_ids=[n.id for n in run],
            first_slot=slot_of[run[0].id],
            last_slot=slot_of[run[-1].id],
        )
        model.blocks.append(block)
        for node in run:
            model.block_of_node[node.id] = block.id

    by_stem: dict[str, list[Block]] = {}
    for block in model.blocks:
        by_stem.setdefault(block.stem_name, []).append(block)
    for stem_name, blocks in by_stem.items():
        blocks.sort(key=lambda b: b.column)
        model.strips[stem_name] = (blocks[0].column, blocks[-1].column)
        for a, b in zip(blocks, blocks[1:]):
            if b.column - a.column >= 2:
                model.intra_stem_edges.append((a.id, b.id))

    model.column_count = len(model.blocks)
    model.row_count = max((b.row for b in model.blocks), default=-1) + 1
    return model
