/**
 * Wiring: URL -> state -> one request per control change -> render.
 * In-flight request tokens guard against out-of-order responses, and the
 * engine owns every computation; this file only routes data to renderers.
 */

import { ApiClient, DiffResponse, GraphResponse } from "./api.js";
import { renderControls } from "./controls.js";
import { renderCompare, SelectionCard } from "./render/compare.js";
import { renderDetail } from "./render/detail.js";
import { renderGraph, stemHue } from "./render/graph.js";
import { renderSummary } from "./render/summary.js";
import { renderTimeline } from "./render/timeline.js";
import { decodeState, defaultState, encodeState, Metric, ViewState } from "./state.js";

const api = new ApiClient("");

interface UiRefs {
  controls: HTMLElement;
  graph: HTMLElement;
  timeline: HTMLElement;
  summary: HTMLElement;
  detail: HTMLElement;
  compare: HTMLElement;
  status: HTMLElement;
}

let state: ViewState = defaultState();
let graphSeq = 0;
let lastGraph: GraphResponse | null = null;
let lastDiff: DiffResponse | null = null;
let selectedClusters = new Set<string>();
let activeDetailCluster: string | null = null;
let summaryByCloc = false;
let hiddenDiffSets = new Set<"intersection" | "onlyA" | "onlyB">();
const selectionMeta = new Map<string, { name: string; clusterIds: string[]; stems: string[] }>();

function refs(): UiRefs {
  const get = (id: string) => {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node;
  };
  return {
    controls: get("controls"),
    graph: get("graph"),
    timeline: get("timeline"),
    summary: get("summary"),
    detail: get("detail"),
    compare: get("compare"),
    status: get("status"),
  };
}

function setStatus(text: string, isError = false): void {
  const node = document.getElementById("status");
  if (node) {
    node.textContent = text;
    node.classList.toggle("error", isError);
  }
}

function pushUrl(): void {
  const qs = encodeState(state);
  history.replaceState(null, "", qs ? `?${qs}` : location.pathname);
}

async function refreshGraph(ui: UiRefs): Promise<void> {
  const seq = ++graphSeq;
  setStatus("loading graph…");
  try {
    const [graph, highlights] = await Promise.all([
      api.graph(state),
      state.searchQueries.length ? api.search(state) : Promise.resolve([]),
    ]);
    if (seq !== graphSeq) return; // a newer request superseded this one
    lastGraph = graph;
    selectedClusters = new Set(
      [...selectedClusters].filter((id) => graph.clusters.some((c) => c.id === id)),
    );
    renderGraph(ui.graph, graph, {
      highlightedBlocks: new Set(highlights),
      selectedClusters,
      onBlockClick: (clusterId) => {
        if (selectedClusters.has(clusterId)) selectedClusters.delete(clusterId);
        else selectedClusters.add(clusterId);
        void refreshGraphDecorations(ui);
        void refreshSummary(ui);
      },
      onStemClick: (stemName) => {
        for (const c of graph.clusters) if (c.stemName === stemName) selectedClusters.add(c.id);
        void refreshGraphDecorations(ui);
        void refreshSummary(ui);
      },
    });
    setStatus(
      `${graph.stems.length} stems · ${graph.clusters.length} clusters · ${Object.keys(graph.nodes).length} nodes`,
    );
    await refreshSummary(ui);
  } catch (err) {
    if (seq === graphSeq) setStatus(String(err), true);
  }
}

async function refreshGraphDecorations(ui: UiRefs): Promise<void> {
  if (!lastGraph) return;
  const highlights = state.searchQueries.length ? await api.search(state) : [];
  renderGraph(ui.graph, lastGraph, {
    highlightedBlocks: new Set(highlights),
    selectedClusters,
    onBlockClick: (clusterId) => {
      if (selectedClusters.has(clusterId)) selectedClusters.delete(clusterId);
      else selectedClusters.add(clusterId);
      void refreshGraphDecorations(ui);
      void refreshSummary(ui);
    },
    onStemClick: (stemName) => {
      for (const c of lastGraph!.clusters) if (c.stemName === stemName) selectedClusters.add(c.id);
      void refreshGraphDecorations(ui);
      void refreshSummary(ui);
    },
  });
}

async function refreshSummary(ui: UiRefs): Promise<void> {
  const header = document.getElementById("summary-tools");
  if (header) {
    header.textContent = "";
    const byClocToggle = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.id = "summary-bycloc";
    box.checked = summaryByCloc;
    box.addEventListener("change", () => {
      summaryByCloc = box.checked;
      void refreshSummary(ui);
    });
    byClocToggle.append(box, " summary by CLOC");
    header.appendChild(byClocToggle);
    const capture = document.createElement("button");
    capture.id = "capture-selection";
    capture.textContent = "capture selection";
    capture.disabled = selectedClusters.size === 0;
    capture.addEventListener("click", () => void captureSelection(ui));
    header.appendChild(capture);
    const clear = document.createElement("button");
    clear.textContent = "clear";
    clear.addEventListener("click", () => {
      selectedClusters.clear();
      void refreshGraphDecorations(ui);
      void refreshSummary(ui);
    });
    header.appendChild(clear);
  }
  if (selectedClusters.size === 0) {
    renderSummary(ui.summary, []);
    ui.detail.textContent = "";
    return;
  }
  try {
    const columns = await api.summary(state, [...selectedClusters], summaryByCloc);
    renderSummary(ui.summary, columns, {
      activeCluster: activeDetailCluster,
      onColumnClick: (clusterId) => {
        activeDetailCluster = clusterId;
        void refreshDetail(ui, clusterId);
      },
    });
  } catch (err) {
    setStatus(String(err), true);
  }
}

async function refreshDetail(ui: UiRefs, clusterId: string): Promise<void> {
  try {
    const detail = await api.detail(state, clusterId);
    renderDetail(ui.detail, detail);
  } catch (err) {
    setStatus(String(err), true);
  }
}

async function captureSelection(ui: UiRefs): Promise<void> {
  const name = `sel-${selectionMeta.size + 1}`;
  try {
    const ids = [...selectedClusters];
    const selectionId = await api.createSelection(state, name, ids);
    const stems = lastGraph
      ? [...new Set(lastGraph.clusters.filter((c) => ids.includes(c.id)).map((c) => c.stemName))]
      : [];
    selectionMeta.set(selectionId, { name, clusterIds: ids, stems });
    state = { ...state, capturedSelections: [...state.capturedSelections, selectionId] };
    pushUrl();
    await refreshCompare(ui);
  } catch (err) {
    setStatus(String(err), true);
  }
}

async function refreshCompare(ui: UiRefs): Promise<void> {
  const cards: SelectionCard[] = state.capturedSelections.map((id) => {
    const meta = selectionMeta.get(id);
    return {
      id,
      name: meta?.name ?? id,
      stemNames: meta?.stems ?? [],
      clusterCount: meta?.clusterIds.length ?? 0,
      hue: stemHue(meta?.stems[0] ?? id),
    };
  });
  const comparison = state.activeComparison;
  if (!comparison && state.capturedSelections.length >= 2) {
    const [a, b] = state.capturedSelections.slice(-2);
    state = { ...state, activeComparison: { a, b, metric: "CommitCount" } };
    pushUrl();
    return refreshCompare(ui);
  }
  lastDiff = null;
  if (comparison) {
    try {
      lastDiff = await api.compare(state, comparison.a, comparison.b, comparison.metric);
    } catch (err) {
      setStatus(String(err), true);
    }
  }
  renderCompare(ui.compare, cards, lastDiff, {
    metric: comparison?.metric ?? "CommitCount",
    onMetricChange: (metric: Metric) => {
      if (!state.activeComparison) return;
      state = { ...state, activeComparison: { ...state.activeComparison, metric } };
      pushUrl();
      void refreshCompare(ui);
    },
    hidden: hiddenDiffSets,
    onToggleSet: (set) => {
      if (hiddenDiffSets.has(set)) hiddenDiffSets.delete(set);
      else hiddenDiffSets.add(set);
      void refreshCompare(ui);
    },
  });
}

async function refreshTimeline(ui: UiRefs): Promise<void> {
  try {
    const timeline = await api.timeline(state.repoId);
    renderTimeline(ui.timeline, timeline, {
      from: state.from,
      to: state.to,
      onBrush: (from, to) => applyState(ui, { ...state, from, to }),
    });
  } catch (err) {
    setStatus(String(err), true);
  }
}

function applyState(ui: UiRefs, next: ViewState): void {
  const graphKeys = (s: ViewState) =>
    JSON.stringify([s.repoId, s.csm, s.step, s.weights, s.releaseSplit, s.nonConflict, s.from, s.to, s.stemTypes, s.kwFilters, s.searchQueries]);
  const graphChanged = graphKeys(next) !== graphKeys(state);
  state = next;
  pushUrl();
  renderControls(ui.controls, state, { onChange: (n) => applyState(ui, n) });
  if (graphChanged) void refreshGraph(ui);
  void refreshTimeline(ui);
}

async function pickRepo(ui: UiRefs): Promise<void> {
  const repos = await api.listRepos();
  if (state.repoId && repos.includes(state.repoId)) return;
  if (repos.length > 0) {
    state = { ...state, repoId: repos[0] };
    pushUrl();
    return;
  }
  setStatus("no repositories loaded; ingest one via POST /api/repos or the CLI", true);
}

export async function boot(): Promise<void> {
  const ui = refs();
  state = decodeState(location.search.startsWith("?") ? location.search.slice(1) : location.search);
  await pickRepo(ui);
  renderControls(ui.controls, state, { onChange: (next) => applyState(ui, next) });
  await refreshGraph(ui);
  await refreshTimeline(ui);
  await refreshCompare(ui);
}

if (typeof document !== "undefined" && document.getElementById("graph")) {
  void boot();
}
