/**
 * Grouped summary: one column per selected cluster, width proportional to
 * commit count (or CLOC), with top-3 bars per criterion.
 */

import { SummaryColumn } from "../api.js";
import { stemHue } from "./graph.js";

const CRITERIA: { key: keyof SummaryColumn; label: string }[] = [
  { key: "topAuthors", label: "Authors" },
  { key: "topTypes", label: "Types" },
  { key: "topDirs", label: "Directories" },
  { key: "topFiles", label: "Files" },
  { key: "topKeywords", label: "Keywords" },
];

export interface SummaryRenderOptions {
  onColumnClick?: (clusterId: string) => void;
  activeCluster?: string | null;
}

export function renderSummary(
  container: HTMLElement,
  columns: SummaryColumn[],
  opts: SummaryRenderOptions = {},
): void {
  container.textContent = "";
  if (columns.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "Select clusters in the graph to summarize them.";
    container.appendChild(empty);
    return;
  }
  const total = columns.reduce((acc, c) => acc + Math.max(1, c.widthWeight), 0);
  const row = document.createElement("div");
  row.className = "summary-row";
  for (const col of columns) {
    const box = document.createElement("div");
    box.className = "summary-col";
    box.dataset.cluster = col.clusterId;
    if (opts.activeCluster === col.clusterId) box.classList.add("active");
    box.style.flexGrow = String(Math.max(1, col.widthWeight) / total);
    box.style.borderTop = `4px solid hsl(${stemHue(col.stemName)} 65% 45%)`;
    if (opts.onColumnClick) {
      box.addEventListener("click", () => opts.onColumnClick?.(col.clusterId));
    }
    const head = document.createElement("div");
    head.className = "summary-head";
    head.textContent = `${col.stemName} · ${col.widthWeight}`;
    box.appendChild(head);
    for (const { key, label } of CRITERIA) {
      const entries = col[key] as [string, number][];
      if (!Array.isArray(entries)) continue;
      const section = document.createElement("div");
      section.className = "summary-section";
      const caption = document.createElement("div");
      caption.className = "summary-caption";
      caption.textContent = label;
      section.appendChild(caption);
      const max = Math.max(1, ...entries.map(([, v]) => v));
      for (const [name, value] of entries) {
        const bar = document.createElement("div");
        bar.className = "summary-bar";
        const fill = document.createElement("span");
        fill.className = "summary-fill";
        fill.style.width = `${(value / max) * 100}%`;
        bar.appendChild(fill);
        const text = document.createElement("span");
        text.className = "summary-text";
        text.textContent = `${name} (${value})`;
        bar.appendChild(text);
        section.appendChild(bar);
      }
      box.appendChild(section);
    }
    row.appendChild(box);
  }
  container.appendChild(row);
}
