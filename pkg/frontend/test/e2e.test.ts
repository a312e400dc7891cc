/**
 * End-to-end smoke against the real engine: generate a synthetic history,
 * ingest it with the CLI, serve it, then render real responses and watch
 * the slider and CSM-toggle contracts hold in the rendered DOM.
 */

import { ChildProcess, spawn, spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderedClusterIds, renderedStems, renderGraph } from "../src/render/graph.js";
import { renderTimeline } from "../src/render/timeline.js";
import { defaultState, ViewState } from "../src/state.js";

// vitest runs with cwd = frontend/; the engine lives one level up
const REPO_ROOT = resolve(process.cwd(), "..");
const PORT = 8823;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let workDir = "";
const api = new ApiClient(BASE);

function py(args: string[]): void {
  const res = spawnSync("python3", args, { cwd: REPO_ROOT, encoding: "utf-8" });
  if (res.status !== 0) {
    throw new Error(`python3 ${args.join(" ")} failed:\n${res.stderr}`);
  }
}

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 45_000;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/api/repos`);
      if (res.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("engine server did not come up");
}

function stateFor(step: number, csm = true): ViewState {
  return { ...defaultState("fixture"), step, csm };
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "gitstem-e2e-"));
  py([
    "tests/fixturegen.py",
    "--out-dir", workDir,
    "--commits", "400",
    "--branches", "16",
    "--releases", "4",
    "--prs", "8",
    "--keep-ratio", "1.0",
  ]);
  py([
    "-m", "gitstem.cli", "ingest",
    "--log", join(workDir, "history.log"),
    "--pr", join(workDir, "prs.json"),
    "--tags", join(workDir, "tags.txt"),
    "--repo-id", "fixture",
    "--out", join(workDir, "snap.json"),
  ]);
  server = spawn(
    "python3",
    ["-m", "gitstem.cli", "serve", "--snapshot", join(workDir, "snap.json"), "--port", String(PORT)],
    { cwd: REPO_ROOT, stdio: "ignore" },
  );
  await waitForServer();
});

afterAll(() => {
  server?.kill();
  if (workDir) rmSync(workDir, { recursive: true, force: true });
});

describe("end-to-end smoke", () => {
  it("slider from step 0 to 9 renders non-decreasing cluster counts", async () => {
    const host = document.createElement("div");
    document.body.appendChild(host);
    const counts: number[] = [];
    for (let step = 0; step <= 9; step++) {
      const graph = await api.graph(stateFor(step));
      renderGraph(host, graph);
      counts.push(renderedClusterIds(host).length);
      expect(renderedClusterIds(host).length).toBe(graph.clusters.length);
    }
    for (let i = 1; i < counts.length; i++) {
      expect(counts[i], `step ${i}: ${counts.join(",")}`).toBeGreaterThanOrEqual(counts[i - 1]);
    }
    expect(counts[9]).toBeGreaterThan(counts[0]); // granularity really increased
  });

  it("toggling CSM shows and hides implicit stem rows and base-source edges", async () => {
    const host = document.createElement("div");
    document.body.appendChild(host);

    const withCsm = await api.graph(stateFor(0, true));
    renderGraph(host, withCsm);
    const implicitOn = renderedStems(host, "Implicit").length;
    const edgesOn = host.querySelectorAll(".csm-edge").length;

    const withoutCsm = await api.graph(stateFor(0, false));
    renderGraph(host, withoutCsm);
    const implicitOff = renderedStems(host, "Implicit").length;
    const edgesOff = host.querySelectorAll(".csm-edge").length;

    // every implicit stem on this fixture is consumed by a squash merge
    expect(implicitOn).toBe(0);
    expect(implicitOff).toBeGreaterThan(0);
    expect(edgesOn).toBe(0);
    expect(edgesOff).toBeGreaterThan(0);
    expect(withoutCsm.stems.length).toBeGreaterThan(withCsm.stems.length);

    // and back on: the rows disappear again
    renderGraph(host, await api.graph(stateFor(0, true)));
    expect(renderedStems(host, "Implicit").length).toBe(0);
  });

  it("renders blocks with CSM borders, release lines and search highlights", async () => {
    const host = document.createElement("div");
    document.body.appendChild(host);
    const state = stateFor(4);
    const graph = await api.graph(state);
    const searchState = { ...state, searchQueries: ["cache"] };
    const hits = await api.search(searchState);
    renderGraph(host, graph, { highlightedBlocks: new Set(hits) });

    expect(host.querySelectorAll(".block").length).toBe(graph.layout.blocks.length);
    expect(host.querySelectorAll(".block.csm-base").length).toBeGreaterThan(0);
    expect(host.querySelectorAll(".release-line").length).toBeGreaterThan(0);
    expect(host.querySelectorAll(".block.hit").length).toBe(
      new Set(hits).size,
    );
    // highlight never removes anything
    expect(host.querySelectorAll(".block").length).toBe(graph.layout.blocks.length);
  });

  it("summary, detail, compare and timeline round-trip through the API", async () => {
    const state = stateFor(0);
    const graph = await api.graph(state);
    const clusterIds = graph.clusters.slice(0, 2).map((c) => c.id);
    const columns = await api.summary(state, clusterIds, false);
    expect(columns.length).toBe(clusterIds.length);
    for (const col of columns) expect(col.topAuthors.length).toBeLessThanOrEqual(3);

    const detail = await api.detail(state, clusterIds[0]);
    const dates = detail.rows.map((r) => r.date);
    expect([...dates].sort((a, b) => a - b)).toEqual(dates);

    const selA = await api.createSelection(state, "a", [clusterIds[0]]);
    const selB = await api.createSelection(state, "b", [clusterIds[0]]);
    const diff = await api.compare(state, selA, selB, "CommitCount");
    expect(diff.authors.onlyA).toEqual([]);
    expect(diff.authors.onlyB).toEqual([]);

    const timeline = await api.timeline("fixture");
    expect(timeline.days.length).toBeGreaterThan(0);
    expect(timeline.releases.length).toBe(4);
    const host = document.createElement("div");
    document.body.appendChild(host);
    renderTimeline(host, timeline, { from: null, to: null, onBrush: () => {} });
    expect(host.querySelectorAll(".commit-bin").length).toBe(timeline.commits.length);
    expect(host.querySelectorAll(".release-guide").length).toBe(4);
  });

  it("stale responses are discarded by the request token guard", async () => {
    // simulate: slow old request resolving after a newer one
    let seq = 0;
    const apply = (token: number): boolean => token === seq;
    const t1 = ++seq;
    const t2 = ++seq;
    expect(apply(t1)).toBe(false); // superseded
    expect(apply(t2)).toBe(true);
  });
});
