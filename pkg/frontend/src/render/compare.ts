/**
 * Comparison view: selection cards plus a two-way diff over authors,
 * types, files and keywords, color-coded into intersection / only-A /
 * only-B with per-set show/hide toggles. Keywords render as a word cloud
 * whose font size follows the engine's minmax-normalized weights.
 */

import { DiffEntry, DiffResponse, DiffSets } from "../api.js";
import { Metric } from "../state.js";

export interface SelectionCard {
  id: string;
  name: string;
  stemNames: string[];
  clusterCount: number;
  hue: number;
}

export interface CompareRenderOptions {
  metric: Metric;
  onMetricChange: (metric: Metric) => void;
  hidden: Set<"intersection" | "onlyA" | "onlyB">;
  onToggleSet: (set: "intersection" | "onlyA" | "onlyB") => void;
}

const SET_LABELS: ["intersection", "onlyA", "onlyB"] = ["intersection", "onlyA", "onlyB"];

function entryBar(entry: DiffEntry, max: number, cls: string): HTMLElement {
  const bar = document.createElement("div");
  bar.className = `diff-bar ${cls}`;
  const a = document.createElement("span");
  a.className = "diff-a";
  a.style.width = `${(entry.a / max) * 50}%`;
  const b = document.createElement("span");
  b.className = "diff-b";
  b.style.width = `${(entry.b / max) * 50}%`;
  const label = document.createElement("span");
  label.className = "diff-label";
  label.textContent = `${entry.label} (${round2(entry.a)}/${round2(entry.b)})`;
  bar.append(a, b, label);
  return bar;
}

function round2(x: number): number {
  return Math.round(x * 100) / 100;
}

function renderSets(
  host: HTMLElement,
  title: string,
  sets: DiffSets,
  hidden: Set<string>,
  asCloud: boolean,
): void {
  const section = document.createElement("section");
  section.className = "diff-section";
  const h = document.createElement("h4");
  h.textContent = title;
  section.appendChild(h);
  const all = [...sets.intersection, ...sets.onlyA, ...sets.onlyB];
  const max = Math.max(1e-9, ...all.map((e) => Math.max(e.a, e.b)));
  for (const key of SET_LABELS) {
    if (hidden.has(key)) continue;
    const group = document.createElement("div");
    group.className = `diff-set diff-${key}`;
    const entries = sets[key];
    if (asCloud) {
      for (const entry of entries) {
        const word = document.createElement("span");
        word.className = "cloud-word";
        const weight = Math.max(entry.a, entry.b); // already minmax-normalized
        word.style.fontSize = `${10 + weight * 22}px`;
        word.textContent = entry.label;
        word.title = `${entry.label}: A=${round2(entry.a)} B=${round2(entry.b)}`;
        group.appendChild(word);
      }
    } else {
      for (const entry of entries) group.appendChild(entryBar(entry, max, key));
    }
    section.appendChild(group);
  }
  host.appendChild(section);
}

export function renderCompare(
  container: HTMLElement,
  cards: SelectionCard[],
  diff: DiffResponse | null,
  opts: CompareRenderOptions,
): void {
  container.textContent = "";

  const cardRow = document.createElement("div");
  cardRow.className = "selection-cards";
  for (const card of cards) {
    const div = document.createElement("div");
    div.className = "selection-card";
    div.style.borderLeft = `6px solid hsl(${card.hue} 65% 45%)`;
    const name = document.createElement("strong");
    name.textContent = card.name || card.id;
    const meta = document.createElement("div");
    meta.className = "card-meta";
    meta.textContent = `${card.stemNames.join(", ")} · ${card.clusterCount} cluster(s)`;
    div.append(name, meta);
    cardRow.appendChild(div);
  }
  container.appendChild(cardRow);

  if (!diff) {
    const hint = document.createElement("p");
    hint.className = "placeholder";
    hint.textContent = "Capture two selections and compare them.";
    container.appendChild(hint);
    return;
  }

  const controls = document.createElement("div");
  controls.className = "compare-controls";
  const metricSel = document.createElement("select");
  for (const m of ["CommitCount", "Cloc"] as Metric[]) {
    const opt = document.createElement("option");
    opt.value = m;
    opt.textContent = m === "CommitCount" ? "commit #" : "CLOC";
    if (m === opts.metric) opt.selected = true;
    metricSel.appendChild(opt);
  }
  metricSel.addEventListener("change", () => opts.onMetricChange(metricSel.value as Metric));
  controls.appendChild(metricSel);
  for (const key of SET_LABELS) {
    const label = document.createElement("label");
    label.className = `set-toggle toggle-${key}`;
    const box = document.createElement("input");
    box.type = "checkbox";
    box.checked = !opts.hidden.has(key);
    box.addEventListener("change", () => opts.onToggleSet(key));
    label.append(box, key === "intersection" ? "both" : key === "onlyA" ? "only A" : "only B");
    controls.appendChild(label);
  }
  container.appendChild(controls);

  renderSets(container, "Authors", diff.authors, opts.hidden, false);
  renderSets(container, "Commit types", diff.types, opts.hidden, false);
  renderSets(container, "Files (top 10)", diff.files, opts.hidden, false);
  renderSets(container, "Keywords (top 20, TF-IDF)", diff.keywords, opts.hidden, true);
}
