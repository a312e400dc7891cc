/**
 * Global temporal filter: two stacked area charts (commits and CLOC per
 * day) over a brushable axis, plus a strip of per-commit boxes below.
 * Because commits are non-uniform in time, release guide lines connect the
 * release's date position in the charts to its bin in the strip.
 */

import { TimelineResponse } from "../api.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const W = 960;
const CHART_H = 46;
const STRIP_H = 16;
const GAP = 6;
const AXIS_H = 14;

export interface TimelineRenderOptions {
  from: number | null;
  to: number | null;
  onBrush: (from: number | null, to: number | null) => void;
}

function el<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function isoDay(ts: number): string {
  return new Date(ts * 1000).toISOString().slice(0, 10);
}

/**
 * Select boxes beside the brush: exact date bounds and a release picker
 * that snaps the range to everything since the previous release.
 */
function renderPickers(
  host: HTMLElement,
  timeline: TimelineResponse,
  opts: TimelineRenderOptions,
): void {
  const bar = document.createElement("div");
  bar.className = "timeline-pickers";

  const fromInput = document.createElement("input");
  fromInput.type = "date";
  fromInput.className = "pick-from";
  if (opts.from !== null) fromInput.value = isoDay(opts.from);
  const toInput = document.createElement("input");
  toInput.type = "date";
  toInput.className = "pick-to";
  if (opts.to !== null) toInput.value = isoDay(opts.to);
  const apply = () => {
    const from = fromInput.value ? Math.floor(Date.parse(`${fromInput.value}T00:00:00Z`) / 1000) : null;
    const to = toInput.value ? Math.floor(Date.parse(`${toInput.value}T23:59:59Z`) / 1000) : null;
    opts.onBrush(from, to);
  };
  fromInput.addEventListener("change", apply);
  toInput.addEventListener("change", apply);

  const releaseSel = document.createElement("select");
  releaseSel.className = "pick-release";
  const none = document.createElement("option");
  none.value = "";
  none.textContent = "release…";
  releaseSel.appendChild(none);
  const ordered = [...timeline.releases].sort((a, b) => a.date - b.date);
  ordered.forEach((release, i) => {
    const opt = document.createElement("option");
    opt.value = String(i);
    opt.textContent = release.version;
    releaseSel.appendChild(opt);
  });
  releaseSel.addEventListener("change", () => {
    if (releaseSel.value === "") return;
    const i = Number(releaseSel.value);
    const start = i > 0 ? ordered[i - 1].date + 1 : null;
    opts.onBrush(start, ordered[i].date);
  });

  const clear = document.createElement("button");
  clear.textContent = "clear";
  clear.addEventListener("click", () => opts.onBrush(null, null));

  bar.append("from ", fromInput, " to ", toInput, " ", releaseSel, " ", clear);
  host.appendChild(bar);
}

function areaPath(
  values: number[],
  xs: number[],
  top: number,
  height: number,
): string {
  const max = Math.max(1, ...values);
  let d = `M ${xs[0]} ${top + height}`;
  values.forEach((v, i) => {
    d += ` L ${xs[i]} ${top + height - (v / max) * height}`;
  });
  d += ` L ${xs[xs.length - 1]} ${top + height} Z`;
  return d;
}

export function renderTimeline(
  container: HTMLElement,
  timeline: TimelineResponse,
  opts: TimelineRenderOptions,
): SVGSVGElement {
  container.textContent = "";
  renderPickers(container, timeline, opts);
  const days = timeline.days;
  const height = 2 * CHART_H + GAP + STRIP_H + AXIS_H + GAP * 2;
  const svg = el("svg");
  svg.setAttribute("class", "timeline");
  svg.setAttribute("viewBox", `0 0 ${W} ${height}`);
  svg.setAttribute("width", String(W));
  svg.setAttribute("height", String(height));
  container.appendChild(svg);
  if (days.length === 0) return svg;

  const t0 = days[0].ts;
  const t1 = days[days.length - 1].ts + 86400;
  const dateX = (ts: number) => ((ts - t0) / Math.max(1, t1 - t0)) * (W - 20) + 10;
  const xs = days.map((d) => dateX(d.ts));

  const commitsArea = el("path");
  commitsArea.setAttribute("class", "area-commits");
  commitsArea.setAttribute("d", areaPath(days.map((d) => d.commitCount), xs, 0, CHART_H));
  svg.appendChild(commitsArea);

  const clocArea = el("path");
  clocArea.setAttribute("class", "area-cloc");
  clocArea.setAttribute("d", areaPath(days.map((d) => d.cloc), xs, CHART_H + GAP, CHART_H));
  svg.appendChild(clocArea);

  // per-commit strip: equal-width boxes in date order
  const stripTop = 2 * CHART_H + GAP * 2;
  const commits = timeline.commits;
  const boxW = Math.max(1, (W - 20) / Math.max(1, commits.length));
  const commitX = new Map<string, number>();
  commits.forEach((c, i) => {
    const x = 10 + i * boxW;
    commitX.set(c.id, x);
    const box = el("rect");
    box.setAttribute("class", "commit-bin");
    box.setAttribute("x", String(x));
    box.setAttribute("y", String(stripTop));
    box.setAttribute("width", String(Math.max(1, boxW - 0.5)));
    box.setAttribute("height", String(STRIP_H));
    const selected =
      (opts.from === null || c.date >= opts.from) && (opts.to === null || c.date <= opts.to);
    if (!selected) box.classList.add("outside");
    svg.appendChild(box);
  });

  // release guide lines: chart position -> strip bin
  for (const release of timeline.releases) {
    const guide = el("line");
    guide.setAttribute("class", "release-guide");
    guide.setAttribute("x1", String(dateX(release.date)));
    guide.setAttribute("y1", "0");
    const binX = commitX.get(release.commitId);
    guide.setAttribute("x2", String(binX !== undefined ? binX + boxW / 2 : dateX(release.date)));
    guide.setAttribute("y2", String(stripTop + STRIP_H));
    svg.appendChild(guide);
    const label = el("text");
    label.setAttribute("class", "release-label");
    label.setAttribute("x", String(dateX(release.date)));
    label.setAttribute("y", String(height - 2));
    label.setAttribute("text-anchor", "middle");
    label.textContent = release.version;
    svg.appendChild(label);
  }

  // selection shading over the charts
  if (opts.from !== null || opts.to !== null) {
    const selFrom = opts.from ?? t0;
    const selTo = opts.to ?? t1;
    const shade = el("rect");
    shade.setAttribute("class", "brush-shade");
    shade.setAttribute("x", String(dateX(selFrom)));
    shade.setAttribute("y", "0");
    shade.setAttribute("width", String(Math.max(0, dateX(selTo) - dateX(selFrom))));
    shade.setAttribute("height", String(2 * CHART_H + GAP));
    svg.appendChild(shade);
  }

  // minimal drag-brush over the whole widget
  let dragStart: number | null = null;
  const tsAt = (clientX: number) => {
    const rect = svg.getBoundingClientRect();
    const frac = Math.min(1, Math.max(0, (clientX - rect.left - 10) / Math.max(1, rect.width - 20)));
    return Math.round(t0 + frac * (t1 - t0));
  };
  svg.addEventListener("mousedown", (ev) => {
    dragStart = tsAt(ev.clientX);
  });
  svg.addEventListener("mouseup", (ev) => {
    if (dragStart === null) return;
    const end = tsAt(ev.clientX);
    if (Math.abs(end - dragStart) < 3600) {
      opts.onBrush(null, null); // a click clears the brush
    } else {
      opts.onBrush(Math.min(dragStart, end), Math.max(dragStart, end));
    }
    dragStart = null;
  });
  return svg;
}
