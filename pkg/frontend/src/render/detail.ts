/**
 * Cluster detail: raw commit rows by date ascending (CSM rows expand to
 * their sources) next to a zoomable file icicle tree.
 */

import { CommitRow, DetailResponse, IcicleNode } from "../api.js";

function fmtDate(ts: number): string {
  return new Date(ts * 1000).toISOString().slice(0, 10);
}

function commitRowElement(row: CommitRow, expandable: boolean): HTMLElement {
  const wrap = document.createElement(expandable ? "details" : "div");
  wrap.className = "commit-row" + (row.isCsmBase ? " csm" : "");
  const head = document.createElement(expandable ? "summary" : "div");
  head.className = "commit-head";
  head.innerHTML = "";
  const idSpan = document.createElement("code");
  idSpan.textContent = row.id.slice(0, 8);
  const typeSpan = document.createElement("span");
  typeSpan.className = `type type-${row.commitType.toLowerCase()}`;
  typeSpan.textContent = row.commitType;
  const meta = document.createElement("span");
  meta.className = "commit-meta";
  meta.textContent = ` ${fmtDate(row.date)} · ${row.author} · ${row.cloc} cloc`;
  const msg = document.createElement("span");
  msg.className = "commit-msg";
  msg.textContent = row.message.split("\n")[0];
  if (row.prRefs.length) {
    const pr = document.createElement("span");
    pr.className = "pr-ref";
    pr.textContent = row.prRefs.map((n) => `#${n}`).join(" ");
    head.append(idSpan, " ", typeSpan, pr, meta, msg);
  } else {
    head.append(idSpan, " ", typeSpan, meta, msg);
  }
  wrap.appendChild(head);
  if (expandable) {
    const sources = document.createElement("div");
    sources.className = "csm-sources";
    for (const source of row.sources) {
      sources.appendChild(commitRowElement(source, false));
    }
    wrap.appendChild(sources);
  }
  return wrap;
}

function renderIcicle(
  host: HTMLElement,
  root: IcicleNode,
  onZoom: (node: IcicleNode) => void,
): void {
  const SVG_NS = "http://www.w3.org/2000/svg";
  const W = 360;
  const H = 220;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "icicle");
  svg.setAttribute("viewBox", `0 0 ${W} ${H}`);
  svg.setAttribute("width", String(W));
  svg.setAttribute("height", String(H));

  const depthOf = (n: IcicleNode): number =>
    n.children.length === 0 ? 1 : 1 + Math.max(...n.children.map(depthOf));
  const depth = Math.max(1, depthOf(root));
  const colW = W / depth;

  const draw = (node: IcicleNode, level: number, y0: number, y1: number) => {
    const g = document.createElementNS(SVG_NS, "g");
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("class", "icicle-node");
    rect.setAttribute("x", String(level * colW));
    rect.setAttribute("y", String(y0));
    rect.setAttribute("width", String(colW - 1));
    rect.setAttribute("height", String(Math.max(1, y1 - y0 - 1)));
    rect.setAttribute("fill", `hsl(${200 + level * 25} 60% ${82 - level * 6}%)`);
    rect.addEventListener("click", () => onZoom(node));
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${node.name || "(root)"} · ${node.cloc} cloc · ${node.commitCount} commits` +
      (node.topAuthor ? ` · top: ${node.topAuthor}` : "");
    rect.appendChild(title);
    g.appendChild(rect);
    if (y1 - y0 > 11 && node.name) {
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("class", "icicle-label");
      label.setAttribute("x", String(level * colW + 3));
      label.setAttribute("y", String(y0 + 10));
      label.textContent = node.name;
      g.appendChild(label);
    }
    svg.appendChild(g);
    const total = Math.max(1, node.children.reduce((acc, c) => acc + c.cloc, 0));
    let y = y0;
    for (const child of node.children) {
      const h = ((y1 - y0) * child.cloc) / total;
      if (h <= 0.4) {
        y += h;
        continue;
      }
      draw(child, level + 1, y, y + h);
      y += h;
    }
  };
  draw(root, 0, 0, H);
  host.appendChild(svg);
}

export function renderDetail(container: HTMLElement, detail: DetailResponse): void {
  container.textContent = "";
  const wrap = document.createElement("div");
  wrap.className = "detail-wrap";

  const icicleHost = document.createElement("div");
  icicleHost.className = "icicle-host";
  let zoomRoot = detail.icicle;
  const redraw = () => {
    icicleHost.textContent = "";
    if (zoomRoot !== detail.icicle) {
      const back = document.createElement("button");
      back.className = "icicle-back";
      back.textContent = "⤴ back to root";
      back.addEventListener("click", () => {
        zoomRoot = detail.icicle;
        redraw();
      });
      icicleHost.appendChild(back);
    }
    renderIcicle(icicleHost, zoomRoot, (node) => {
      if (node !== zoomRoot && node.children.length > 0) {
        zoomRoot = node;
        redraw();
      }
    });
  };
  redraw();
  wrap.appendChild(icicleHost);

  const table = document.createElement("div");
  table.className = "commit-table";
  for (const row of detail.rows) {
    table.appendChild(commitRowElement(row, row.isCsmBase && row.sources.length > 0));
  }
  wrap.appendChild(table);
  container.appendChild(wrap);
}
