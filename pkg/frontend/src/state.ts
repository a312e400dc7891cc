/**
 * The whole UI state, serializable to and from the URL query string so any
 * view is deep-linkable. The engine owns all analysis; this is only the
 * parameter tuple plus pure UI concerns (captured selections, search text).
 */

export type KwCriterion = "author" | "type" | "file" | "message";
export type KwMode = "include" | "exclude";
export type Metric = "CommitCount" | "Cloc";

export interface KeywordFilter {
  criterion: KwCriterion;
  text: string;
  mode: KwMode;
}

export interface Weights {
  author: number;
  date: number;
  type: number;
  file: number;
  message: number;
}

export interface Comparison {
  a: string;
  b: string;
  metric: Metric;
}

export const STEM_TYPES = [
  "Main",
  "Explicit",
  "Implicit",
  "PrOpen",
  "PrMerged",
  "PrClosed",
] as const;

export interface ViewState {
  repoId: string;
  /** main-branch override used when the repo still needs ingesting */
  mainBranch: string;
  csm: boolean;
  /** clustering slider step 0..9; up (9) means granular */
  step: number;
  weights: Weights;
  releaseSplit: boolean;
  nonConflict: boolean;
  from: number | null;
  to: number | null;
  /** null means every stem type is visible */
  stemTypes: string[] | null;
  kwFilters: KeywordFilter[];
  capturedSelections: string[];
  activeComparison: Comparison | null;
  searchQueries: string[];
}

export const SLIDER_STEPS = 10;

export function thresholdOf(state: ViewState): number {
  return 1 - state.step / (SLIDER_STEPS - 1);
}

export function defaultState(repoId = ""): ViewState {
  return {
    repoId,
    mainBranch: "master",
    csm: true,
    step: 0,
    weights: { author: 1, date: 1, type: 1, file: 1, message: 1 },
    releaseSplit: false,
    nonConflict: false,
    from: null,
    to: null,
    stemTypes: null,
    kwFilters: [],
    capturedSelections: [],
    activeComparison: null,
    searchQueries: [],
  };
}

const KW_SEP = ":";

function encodeKw(f: KeywordFilter): string {
  // criterion and mode never contain ":", so the text may
  return [f.criterion, f.mode, f.text].join(KW_SEP);
}

function decodeKw(raw: string): KeywordFilter | null {
  const first = raw.indexOf(KW_SEP);
  const second = raw.indexOf(KW_SEP, first + 1);
  if (first < 0 || second < 0) return null;
  const criterion = raw.slice(0, first) as KwCriterion;
  const mode = raw.slice(first + 1, second) as KwMode;
  const text = raw.slice(second + 1);
  if (!["author", "type", "file", "message"].includes(criterion)) return null;
  if (!["include", "exclude"].includes(mode)) return null;
  if (!text) return null;
  return { criterion, mode, text };
}

export function encodeState(state: ViewState): string {
  const q = new URLSearchParams();
  if (state.repoId) q.set("repo", state.repoId);
  if (state.mainBranch !== "master") q.set("main", state.mainBranch);
  if (!state.csm) q.set("csm", "0");
  if (state.step !== 0) q.set("step", String(state.step));
  const w = state.weights;
  if (w.author !== 1 || w.date !== 1 || w.type !== 1 || w.file !== 1 || w.message !== 1) {
    q.set("w", [w.author, w.date, w.type, w.file, w.message].join(","));
  }
  if (state.releaseSplit) q.set("rs", "1");
  if (state.nonConflict) q.set("nc", "1");
  if (state.from !== null) q.set("from", String(state.from));
  if (state.to !== null) q.set("to", String(state.to));
  if (state.stemTypes !== null) q.set("st", state.stemTypes.join(","));
  for (const f of state.kwFilters) q.append("kw", encodeKw(f));
  for (const sel of state.capturedSelections) q.append("sel", sel);
  if (state.activeComparison) {
    const c = state.activeComparison;
    q.set("cmp", [c.a, c.b, c.metric].join(","));
  }
  for (const query of state.searchQueries) q.append("q", query);
  return q.toString();
}

export function decodeState(queryString: string): ViewState {
  const q = new URLSearchParams(queryString);
  const state = defaultState(q.get("repo") ?? "");
  state.mainBranch = q.get("main") ?? "master";
  state.csm = q.get("csm") !== "0";
  const step = Number(q.get("step") ?? "0");
  state.step = Number.isInteger(step) && step >= 0 && step < SLIDER_STEPS ? step : 0;
  const w = q.get("w");
  if (w !== null) {
    const parts = w.split(",").map(Number);
    if (parts.length === 5 && parts.every((x) => Number.isFinite(x) && x >= 0)) {
      state.weights = {
        author: parts[0],
        date: parts[1],
        type: parts[2],
        file: parts[3],
        message: parts[4],
      };
    }
  }
  state.releaseSplit = q.get("rs") === "1";
  state.nonConflict = q.get("nc") === "1";
  const from = q.get("from");
  const to = q.get("to");
  state.from = from !== null && from !== "" ? Number(from) : null;
  state.to = to !== null && to !== "" ? Number(to) : null;
  const st = q.get("st");
  state.stemTypes = st !== null ? (st === "" ? [] : st.split(",")) : null;
  state.kwFilters = q.getAll("kw").flatMap((raw) => {
    const f = decodeKw(raw);
    return f ? [f] : [];
  });
  state.capturedSelections = q.getAll("sel");
  const cmp = q.get("cmp");
  if (cmp !== null) {
    const [a, b, metric] = cmp.split(",");
    if (a && b && (metric === "CommitCount" || metric === "Cloc")) {
      state.activeComparison = { a, b, metric };
    }
  }
  state.searchQueries = q.getAll("q");
  return state;
}

/** Engine-facing query parameters for /graph and friends. */
export function graphQuery(state: ViewState): URLSearchParams {
  const q = new URLSearchParams();
  q.set("csm", state.csm ? "true" : "false");
  q.set("threshold", String(thresholdOf(state)));
  q.set("wAuthor", String(state.weights.author));
  q.set("wDate", String(state.weights.date));
  q.set("wType", String(state.weights.type));
  q.set("wFile", String(state.weights.file));
  q.set("wMessage", String(state.weights.message));
  q.set("releaseSplit", state.releaseSplit ? "true" : "false");
  q.set("nonConflict", state.nonConflict ? "true" : "false");
  if (state.from !== null) q.set("from", String(state.from));
  if (state.to !== null) q.set("to", String(state.to));
  if (state.stemTypes !== null) q.set("stemTypes", state.stemTypes.join(","));
  for (const f of state.kwFilters) {
    q.append("kwCriterion", f.criterion);
    q.append("kwText", f.text);
    q.append("kwMode", f.mode);
  }
  return q;
}
