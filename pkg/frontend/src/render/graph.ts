/**
 * Stem graph: a column/row grid of blocks with cluster outlines, stem
 * strips, intra-stem edges, release lines and optional CSM base↔source
 * edges. Pure rendering of the engine's layout; nothing is computed here.
 */

import { BlockInfo, GraphResponse } from "../api.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const CELL_W = 20;
export const ROW_H = 72;
const BLOCK_W = 14;
const STRIP_H = 4;
const MARGIN = { top: 26, left: 12, right: 16, bottom: 8 };

export interface GraphRenderOptions {
  highlightedBlocks?: Set<string>;
  selectedClusters?: Set<string>;
  onBlockClick?: (clusterId: string, block: BlockInfo) => void;
  onStemClick?: (stemName: string) => void;
}

/** Deterministic hue per stem name. */
export function stemHue(name: string): number {
  let h = 0;
  for (let i = 0; i < name.length; i++) h = (h * 31 + name.charCodeAt(i)) >>> 0;
  return h % 360;
}

function el<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function blockGeometry(block: BlockInfo, maxHeight: number) {
  const x = MARGIN.left + block.column * CELL_W;
  const usable = ROW_H - STRIP_H - 14;
  const h = Math.max(8, Math.round((block.height / maxHeight) * usable));
  const rowTop = MARGIN.top + block.row * ROW_H;
  const y = rowTop + (usable - h) / 2; // vertically centered inside the row
  return { x, y, w: BLOCK_W, h };
}

export function renderGraph(
  container: HTMLElement,
  graph: GraphResponse,
  opts: GraphRenderOptions = {},
): SVGSVGElement {
  container.textContent = "";
  const layout = graph.layout;
  const width = MARGIN.left + layout.columnCount * CELL_W + MARGIN.right;
  const height = MARGIN.top + Math.max(1, layout.rowCount) * ROW_H + MARGIN.bottom;

  const svg = el("svg");
  svg.setAttribute("class", "stem-graph");
  svg.setAttribute("viewBox", `0 0 ${Math.max(width, 60)} ${height}`);
  svg.setAttribute("width", String(Math.max(width, 60)));
  svg.setAttribute("height", String(height));

  const stemType = new Map(graph.stems.map((s) => [s.name, s.stemType]));
  const maxHeight = Math.max(1, ...layout.blocks.map((b) => b.height));
  const byId = new Map(layout.blocks.map((b) => [b.id, b]));

  // stem strips first, underneath everything
  for (const [stem, [lo, hi]] of Object.entries(layout.strips)) {
    const row = layout.rowAssignments[stem];
    const strip = el("rect");
    strip.setAttribute("class", "stem-strip");
    strip.dataset.stem = stem;
    strip.dataset.stemType = stemType.get(stem) ?? "";
    strip.setAttribute("x", String(MARGIN.left + lo * CELL_W - 2));
    strip.setAttribute("y", String(MARGIN.top + row * ROW_H + ROW_H - STRIP_H - 10));
    strip.setAttribute("width", String((hi - lo) * CELL_W + BLOCK_W + 4));
    strip.setAttribute("height", String(STRIP_H));
    strip.setAttribute("fill", `hsl(${stemHue(stem)} 65% 45%)`);
    if (opts.onStemClick) {
      strip.addEventListener("click", () => opts.onStemClick?.(stem));
      strip.setAttribute("cursor", "pointer");
    }
    const title = el("title");
    title.textContent = `${stem} (${stemType.get(stem) ?? "?"})`;
    strip.appendChild(title);
    svg.appendChild(strip);
  }

  // intra-stem edges between non-adjacent blocks
  for (const [aId, bId] of layout.intraStemEdges) {
    const a = byId.get(aId);
    const b = byId.get(bId);
    if (!a || !b) continue;
    const ga = blockGeometry(a, maxHeight);
    const gb = blockGeometry(b, maxHeight);
    const line = el("line");
    line.setAttribute("class", "stem-edge");
    line.setAttribute("x1", String(ga.x + BLOCK_W));
    line.setAttribute("y1", String(ga.y + ga.h / 2));
    line.setAttribute("x2", String(gb.x));
    line.setAttribute("y2", String(gb.y + gb.h / 2));
    line.setAttribute("stroke", `hsl(${stemHue(a.stemName)} 50% 60%)`);
    line.setAttribute("stroke-dasharray", "3 3");
    svg.appendChild(line);
  }

  // base↔source edges, visible only while CSM is off
  for (const edge of graph.csmEdges) {
    const a = edge.baseBlock ? byId.get(edge.baseBlock) : undefined;
    const b = edge.sourceBlock ? byId.get(edge.sourceBlock) : undefined;
    if (!a || !b || a.id === b.id) continue;
    const ga = blockGeometry(a, maxHeight);
    const gb = blockGeometry(b, maxHeight);
    const line = el("line");
    line.setAttribute("class", "csm-edge");
    line.setAttribute("x1", String(ga.x + BLOCK_W / 2));
    line.setAttribute("y1", String(ga.y + ga.h / 2));
    line.setAttribute("x2", String(gb.x + BLOCK_W / 2));
    line.setAttribute("y2", String(gb.y + gb.h / 2));
    svg.appendChild(line);
  }

  // cluster outlines with commit counts
  const clusterBlocks = new Map<string, BlockInfo[]>();
  for (const block of layout.blocks) {
    const list = clusterBlocks.get(block.clusterId) ?? [];
    list.push(block);
    clusterBlocks.set(block.clusterId, list);
  }
  const clusterById = new Map(graph.clusters.map((c) => [c.id, c]));
  for (const [clusterId, blocks] of clusterBlocks) {
    const geos = blocks.map((b) => blockGeometry(b, maxHeight));
    const x0 = Math.min(...geos.map((g) => g.x)) - 3;
    const x1 = Math.max(...geos.map((g) => g.x + g.w)) + 3;
    const y0 = Math.min(...geos.map((g) => g.y)) - 3;
    const y1 = Math.max(...geos.map((g) => g.y + g.h)) + 3;
    const outline = el("rect");
    outline.setAttribute("class", "cluster-outline");
    outline.dataset.cluster = clusterId;
    outline.dataset.stem = blocks[0].stemName;
    if (opts.selectedClusters?.has(clusterId)) outline.classList.add("selected");
    outline.setAttribute("x", String(x0));
    outline.setAttribute("y", String(y0));
    outline.setAttribute("width", String(x1 - x0));
    outline.setAttribute("height", String(y1 - y0));
    outline.setAttribute("rx", "3");
    svg.appendChild(outline);
    const info = clusterById.get(clusterId);
    if (info && x1 - x0 > 30) {
      const label = el("text");
      label.setAttribute("class", "cluster-count");
      label.setAttribute("x", String(x1 - 2));
      label.setAttribute("y", String(y1 + 9));
      label.setAttribute("text-anchor", "end");
      label.textContent = String(info.commitCount);
      svg.appendChild(label);
    }
  }

  // blocks
  for (const block of layout.blocks) {
    const g = blockGeometry(block, maxHeight);
    const rect = el("rect");
    rect.setAttribute("class", "block");
    rect.dataset.block = block.id;
    rect.dataset.cluster = block.clusterId;
    rect.dataset.stem = block.stemName;
    rect.dataset.stemType = stemType.get(block.stemName) ?? "";
    rect.setAttribute("x", String(g.x));
    rect.setAttribute("y", String(g.y));
    rect.setAttribute("width", String(g.w));
    rect.setAttribute("height", String(g.h));
    rect.setAttribute("rx", "2");
    rect.setAttribute("fill", `hsl(${stemHue(block.stemName)} 60% 80%)`);
    if (block.hasCsmBase) {
      // black border while CSM is on; dashed gray once it is disabled
      rect.classList.add(graph.csm ? "csm-base" : "csm-base-disabled");
    }
    if (opts.highlightedBlocks?.has(block.id)) rect.classList.add("hit");
    if (opts.onBlockClick) {
      rect.addEventListener("click", () => opts.onBlockClick?.(block.clusterId, block));
      rect.setAttribute("cursor", "pointer");
    }
    const title = el("title");
    title.textContent = `${block.stemName}: ${block.height} commit(s)`;
    rect.appendChild(title);
    svg.appendChild(rect);
  }

  // release lines on the right edge of their block, version on top
  for (const [column, version] of layout.releaseMarkers) {
    const x = MARGIN.left + column * CELL_W + BLOCK_W + 2;
    const line = el("line");
    line.setAttribute("class", "release-line");
    line.setAttribute("x1", String(x));
    line.setAttribute("y1", String(MARGIN.top - 12));
    line.setAttribute("x2", String(x));
    line.setAttribute("y2", String(height - MARGIN.bottom));
    svg.appendChild(line);
    const label = el("text");
    label.setAttribute("class", "release-label");
    label.setAttribute("x", String(x));
    label.setAttribute("y", String(MARGIN.top - 15));
    label.setAttribute("text-anchor", "middle");
    label.textContent = version;
    svg.appendChild(label);
  }

  container.appendChild(svg);
  return svg;
}

/** Distinct cluster ids currently rendered (used by tests and the UI). */
export function renderedClusterIds(container: HTMLElement): string[] {
  const ids = new Set<string>();
  container.querySelectorAll<SVGRectElement>(".cluster-outline").forEach((n) => {
    if (n.dataset.cluster) ids.add(n.dataset.cluster);
  });
  return [...ids];
}

/** Stem names of currently rendered strips, by stem type if given. */
export function renderedStems(container: HTMLElement, stemType?: string): string[] {
  const out: string[] = [];
  container.querySelectorAll<SVGRectElement>(".stem-strip").forEach((n) => {
    if (!stemType || n.dataset.stemType === stemType) out.push(n.dataset.stem ?? "");
  });
  return out;
}
