/** Thin typed client over the engine's HTTP API. */

import { graphQuery, Metric, ViewState } from "./state.js";

export interface StemInfo {
  name: string;
  stemType: string;
  headId: string;
  nodeIds: string[];
}

export interface ClusterInfo {
  id: string;
  stemName: string;
  members: string[];
  commitCount: number;
  cloc: number;
  authors: string[];
  types: Record<string, number>;
  fileCount: number;
  dateRange: [number, number];
  releaseTag: string | null;
}

export interface BlockInfo {
  id: string;
  clusterId: string;
  stemName: string;
  row: number;
  column: number;
  height: number;
  hasCsmBase: boolean;
  releaseTag: string | null;
  memberIds: string[];
}

export interface LayoutInfo {
  blocks: BlockInfo[];
  rowAssignments: Record<string, number>;
  intraStemEdges: [string, string][];
  strips: Record<string, [number, number]>;
  releaseMarkers: [number, string][];
  columnCount: number;
  rowCount: number;
}

export interface CsmEdge {
  baseId: string;
  sourceId: string;
  baseBlock: string | null;
  sourceBlock: string | null;
}

export interface GraphResponse {
  repoId: string;
  csm: boolean;
  stems: StemInfo[];
  clusters: ClusterInfo[];
  csmNodes: { baseId: string; sourceIds: string[]; coauthors: string[]; prRefs: number[] }[];
  csmEdges: CsmEdge[];
  layout: LayoutInfo;
  releases: { version: string; commitId: string; date: number }[];
  nodes: Record<
    string,
    { stemName: string; commitCount: number; cloc: number; date: number; author: string; isCsmBase: boolean }
  >;
}

export interface SummaryColumn {
  clusterId: string;
  stemName: string;
  widthWeight: number;
  topAuthors: [string, number][];
  topTypes: [string, number][];
  topFiles: [string, number][];
  topDirs: [string, number][];
  topKeywords: [string, number][];
}

export interface CommitRow {
  id: string;
  author: string;
  date: number;
  message: string;
  commitType: string;
  cloc: number;
  isCsmBase: boolean;
  sourceIds: string[];
  sources: CommitRow[];
  prRefs: number[];
}

export interface IcicleNode {
  name: string;
  cloc: number;
  commitCount: number;
  topAuthor: string | null;
  children: IcicleNode[];
}

export interface DetailResponse {
  rows: CommitRow[];
  icicle: IcicleNode;
}

export interface DiffEntry {
  label: string;
  a: number;
  b: number;
}

export interface DiffSets {
  intersection: DiffEntry[];
  onlyA: DiffEntry[];
  onlyB: DiffEntry[];
}

export interface DiffResponse {
  metric: Metric;
  authors: DiffSets;
  types: DiffSets;
  files: DiffSets;
  keywords: DiffSets;
}

export interface TimelineResponse {
  days: { date: string; ts: number; commitCount: number; cloc: number }[];
  releases: { version: string; date: number; commitId: string }[];
  commits: { id: string; date: number; cloc: number }[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function asJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = await res.json();
      if (body && typeof body.error === "string") detail = body.error;
    } catch {
      /* non-JSON error body */
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

/** Graph params as a JSON-body object; repeated keys become arrays. */
function paramsObject(state: ViewState): Record<string, string | string[]> {
  const obj: Record<string, string | string[]> = {};
  graphQuery(state).forEach((value, key) => {
    const existing = obj[key];
    if (existing === undefined) obj[key] = value;
    else if (Array.isArray(existing)) existing.push(value);
    else obj[key] = [existing, value];
  });
  return obj;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private url(path: string, query?: URLSearchParams): string {
    const qs = query ? `?${query.toString()}` : "";
    return `${this.base}${path}${qs}`;
  }

  async listRepos(): Promise<string[]> {
    const body = await asJson<{ repoIds: string[] }>(await fetch(this.url("/api/repos")));
    return body.repoIds;
  }

  async ingest(repoId: string, logPath: string, opts: { prPath?: string; tagPath?: string; mainBranch?: string } = {}) {
    return asJson<{ repoId: string; commitCount: number; stemCount: number }>(
      await fetch(this.url("/api/repos"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ repoId, logPath, prPath: opts.prPath, tagPath: opts.tagPath, mainBranch: opts.mainBranch }),
      }),
    );
  }

  async graph(state: ViewState): Promise<GraphResponse> {
    return asJson(await fetch(this.url(`/api/repos/${encodeURIComponent(state.repoId)}/graph`, graphQuery(state))));
  }

  async timeline(repoId: string): Promise<TimelineResponse> {
    return asJson(await fetch(this.url(`/api/repos/${encodeURIComponent(repoId)}/timeline`)));
  }

  async summary(state: ViewState, clusterIds: string[], byCloc: boolean): Promise<SummaryColumn[]> {
    const q = graphQuery(state);
    q.set("ids", clusterIds.join(","));
    q.set("byCloc", byCloc ? "true" : "false");
    const body = await asJson<{ columns: SummaryColumn[] }>(
      await fetch(this.url(`/api/repos/${encodeURIComponent(state.repoId)}/clusters/summary`, q)),
    );
    return body.columns;
  }

  async detail(state: ViewState, clusterId: string): Promise<DetailResponse> {
    return asJson(
      await fetch(
        this.url(`/api/repos/${encodeURIComponent(state.repoId)}/clusters/${encodeURIComponent(clusterId)}/detail`, graphQuery(state)),
      ),
    );
  }

  async createSelection(state: ViewState, name: string, clusterIds: string[]): Promise<string> {
    const body = await asJson<{ selectionId: string }>(
      await fetch(this.url(`/api/repos/${encodeURIComponent(state.repoId)}/selections`), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ name, clusterIds, params: paramsObject(state) }),
      }),
    );
    return body.selectionId;
  }

  async compare(state: ViewState, a: string, b: string, metric: Metric): Promise<DiffResponse> {
    return asJson(
      await fetch(this.url(`/api/repos/${encodeURIComponent(state.repoId)}/compare`), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ selectionA: a, selectionB: b, metric, params: paramsObject(state) }),
      }),
    );
  }

  async search(state: ViewState): Promise<string[]> {
    const q = graphQuery(state);
    for (const query of state.searchQueries) q.append("q", query);
    const body = await asJson<{ blockIds: string[] }>(
      await fetch(this.url(`/api/repos/${encodeURIComponent(state.repoId)}/search`, q)),
    );
    return body.blockIds;
  }
}
