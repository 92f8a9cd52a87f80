// DOM rendering for the console panes: scene-graph SVG (metric coordinates),
// occupancy raster on a canvas, transcript list, clarify dialog, status bar.

import { decodeRow, FREE, OCCUPIED } from "./protocol.js";
import type { ConsoleState } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderGraph(svg: SVGSVGElement, state: ConsoleState): void {
  svg.replaceChildren();
  const graph = state.graph;
  const grid = state.grid;
  if (!graph || !grid) return;
  const [ox, oy] = grid.origin;
  const w = grid.width * grid.resolution;
  const h = grid.height * grid.resolution;
  svg.setAttribute("viewBox", `0 0 ${w} ${h}`);
  const sx = (x: number) => x - ox;
  const sy = (y: number) => h - (y - oy); // north up

  const coords = new Map<string, [number, number]>();
  for (const n of [...graph.regions, ...graph.objects]) {
    coords.set(n.name, n.coords);
  }
  const edge = (a: string, b: string, cls: string) => {
    const ca = coords.get(a);
    const cb = coords.get(b);
    if (!ca || !cb) return;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(sx(ca[0])));
    line.setAttribute("y1", String(sy(ca[1])));
    line.setAttribute("x2", String(sx(cb[0])));
    line.setAttribute("y2", String(sy(cb[1])));
    line.setAttribute("class", cls);
    svg.appendChild(line);
  };
  for (const [a, b] of graph.region_connections) edge(a, b, "edge-region");
  for (const [o, r] of graph.object_connections) edge(o, r, "edge-object");

  const dot = (name: string, c: [number, number], cls: string, r: number) => {
    const g = document.createElementNS(SVG_NS, "g");
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(sx(c[0])));
    circle.setAttribute("cy", String(sy(c[1])));
    circle.setAttribute("r", String(r));
    circle.setAttribute("class", cls);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(sx(c[0]) + r + 0.4));
    label.setAttribute("y", String(sy(c[1]) + 0.5));
    label.setAttribute("class", "node-label");
    label.textContent = name;
    g.append(circle, label);
    svg.appendChild(g);
  };
  for (const n of graph.regions) {
    const here = n.name === graph.robot_location;
    dot(n.name, n.coords, here ? "node-robot" : "node-region", here ? 1.4 : 1.0);
  }
  for (const n of graph.objects) dot(n.name, n.coords, "node-object", 0.9);

  if (state.robot) {
    const marker = document.createElementNS(SVG_NS, "circle");
    marker.setAttribute("cx", String(sx(state.robot.pose[0])));
    marker.setAttribute("cy", String(sy(state.robot.pose[1])));
    marker.setAttribute("r", "0.7");
    marker.setAttribute("class", "robot-pose");
    svg.appendChild(marker);
  }
}

export function renderGrid(canvas: HTMLCanvasElement, state: ConsoleState): void {
  const grid = state.grid;
  if (!grid) return;
  canvas.width = grid.width;
  canvas.height = grid.height;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const img = ctx.createImageData(grid.width, grid.height);
  grid.rows.forEach((row, i) => {
    const cells = decodeRow(row); // row 0 is northernmost = canvas row 0
    cells.forEach((sym, x) => {
      const off = (i * grid.width + x) * 4;
      const shade = sym === FREE ? 235 : sym === OCCUPIED ? 25 : 130;
      img.data[off] = img.data[off + 1] = img.data[off + 2] = shade;
      img.data[off + 3] = 255;
    });
  });
  ctx.putImageData(img, 0, 0);
  if (state.robot) {
    const [ox, oy] = grid.origin;
    const cx = (state.robot.pose[0] - ox) / grid.resolution;
    const cy = grid.height - (state.robot.pose[1] - oy) / grid.resolution;
    ctx.fillStyle = "#e11";
    ctx.beginPath();
    ctx.arc(cx, cy, 2.2, 0, Math.PI * 2);
    ctx.fill();
  }
}

export function renderTranscript(pane: HTMLElement, state: ConsoleState): void {
  pane.replaceChildren();
  for (const item of state.transcript) {
    const entry = el("div", `entry entry-${item.kind}`);
    entry.append(el("div", "entry-title", `#${item.seq}  ${item.title}`));
    if (item.body) entry.append(el("div", "entry-body", item.body));
    pane.append(entry);
  }
  pane.scrollTop = pane.scrollHeight;
}

export function renderStatus(bar: HTMLElement, state: ConsoleState): void {
  const m = state.metrics;
  const pieces = [`mission: ${state.missionState}`];
  if (m) {
    pieces.push(
      `time ${m.time.toFixed(0)}s`,
      `distance ${m.distance.toFixed(1)}m`,
      `interactions ${m.interactions}`,
      `queries ${m.queries}`,
    );
  }
  if (state.terminal) {
    pieces.push(state.terminal.state === "completed"
      ? `answer: ${state.terminal.detail}`
      : `failed: ${state.terminal.detail}`);
  }
  if (state.missedSeqs.length > 0) {
    pieces.push(`MISSED EVENTS: ${state.missedSeqs.join(",")}`);
  }
  bar.textContent = pieces.join("  |  ");
}

export function renderClarify(
  dialog: HTMLElement, state: ConsoleState,
  onReply: (text: string) => void,
): void {
  dialog.replaceChildren();
  if (state.pendingClarify === null) {
    dialog.style.display = "none";
    return;
  }
  dialog.style.display = "block";
  dialog.append(el("div", "clarify-question", state.pendingClarify));
  const input = el("input");
  input.type = "text";
  input.placeholder = "your reply";
  const button = el("button", "", "Reply");
  button.addEventListener("click", () => {
    if (input.value.trim()) onReply(input.value.trim());
  });
  dialog.append(input, button);
}
