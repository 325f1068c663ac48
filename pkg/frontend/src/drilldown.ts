/** Pair drill-down: two graphs side by side, matched nodes linked, and the
 * contribution table whose rows sum to the raw score exactly.
 *
 * Everything shown is server output: the contributions come from
 * `GET /compare`, the structure from `GET /graphs/{id}`. The sum line adds
 * the API's own numbers in order and flags (never hides) any gap.
 */

import type { CompareResult, GraphDetail } from "./api.js";
import { forceLayout, type LayoutResult } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const PANE_WIDTH = 320;
const PANE_HEIGHT = 300;

export interface DrilldownOptions {
  maxNodes?: number;
}

/** "graph:node" -> node id within its graph. */
function nodePart(docId: string): string {
  const colon = docId.indexOf(":");
  return colon < 0 ? docId : docId.slice(colon + 1);
}

function layoutGraph(graph: GraphDetail, maxNodes: number): LayoutResult {
  return forceLayout(
    graph.nodes.map((n) => n.id),
    graph.edges.map((e) => [e.src, e.dst]),
    { width: PANE_WIDTH, height: PANE_HEIGHT, maxNodes, seed: 7 },
  );
}

function drawPane(
  svg: SVGSVGElement,
  graph: GraphDetail,
  layout: LayoutResult,
  offsetX: number,
  matched: Set<string>,
): Map<string, { x: number; y: number }> {
  const kinds = new Map(graph.nodes.map((n) => [n.id, n.kind]));
  const labels = new Map(graph.nodes.map((n) => [n.id, n.label]));
  const placed = new Map<string, { x: number; y: number }>();

  for (const [src, dst] of layout.edges) {
    const a = layout.nodes.find((n) => n.id === src)!;
    const b = layout.nodes.find((n) => n.id === dst)!;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(offsetX + a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(offsetX + b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("class", "graph-edge");
    svg.appendChild(line);
  }

  for (const node of layout.nodes) {
    const x = offsetX + node.x;
    placed.set(node.id, { x, y: node.y });
    const isSubject = kinds.get(node.id) === "subject";
    const shape = document.createElementNS(SVG_NS, isSubject ? "rect" : "circle");
    if (isSubject) {
      shape.setAttribute("x", String(x - 6));
      shape.setAttribute("y", String(node.y - 6));
      shape.setAttribute("width", "12");
      shape.setAttribute("height", "12");
    } else {
      shape.setAttribute("cx", String(x));
      shape.setAttribute("cy", String(node.y));
      shape.setAttribute("r", "6");
    }
    shape.setAttribute(
      "class",
      `graph-node ${isSubject ? "subject" : "object"}${matched.has(node.id) ? " matched" : ""}`,
    );
    shape.dataset.node = `${graph.graph_id}:${node.id}`;
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${node.id}: ${labels.get(node.id) ?? ""}`;
    shape.appendChild(title);
    svg.appendChild(shape);
  }
  return placed;
}

export function renderDrilldown(
  container: HTMLElement,
  compare: CompareResult,
  graphA: GraphDetail,
  graphB: GraphDetail,
  options?: DrilldownOptions,
): void {
  container.textContent = "";
  const maxNodes = options?.maxNodes ?? 40;

  const header = document.createElement("div");
  header.className = "drilldown-header";
  header.textContent =
    `${compare.a} vs ${compare.b} — raw ${compare.raw}, ` +
    `clamped ${compare.clamped}, ${compare.mps_size} matched pairs`;
  container.appendChild(header);

  if (compare.pairs.length === 0) {
    const banner = document.createElement("div");
    banner.className = "drilldown-zero";
    banner.textContent = "No shared buckets between these graphs — score 0.";
    container.appendChild(banner);
    return;
  }

  const matchedA = new Set(compare.pairs.map((p) => nodePart(p.a_node)));
  const matchedB = new Set(compare.pairs.map((p) => nodePart(p.b_node)));

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "drilldown-graphs");
  svg.setAttribute("viewBox", `0 0 ${PANE_WIDTH * 2 + 40} ${PANE_HEIGHT}`);
  svg.setAttribute("width", String(PANE_WIDTH * 2 + 40));
  svg.setAttribute("height", String(PANE_HEIGHT));

  const layoutA = layoutGraph(graphA, maxNodes);
  const layoutB = layoutGraph(graphB, maxNodes);
  const placedA = drawPane(svg, graphA, layoutA, 0, matchedA);
  const placedB = drawPane(svg, graphB, layoutB, PANE_WIDTH + 40, matchedB);

  for (const pair of compare.pairs) {
    const a = placedA.get(nodePart(pair.a_node));
    const b = placedB.get(nodePart(pair.b_node));
    if (!a || !b) continue; // endpoint elided from a very large graph
    const link = document.createElementNS(SVG_NS, "line");
    link.setAttribute("x1", String(a.x));
    link.setAttribute("y1", String(a.y));
    link.setAttribute("x2", String(b.x));
    link.setAttribute("y2", String(b.y));
    link.setAttribute("class", "pair-link");
    svg.appendChild(link);
  }
  container.appendChild(svg);

  const elided = layoutA.elided + layoutB.elided;
  if (elided > 0) {
    const note = document.createElement("div");
    note.className = "drilldown-elided";
    note.textContent = `${elided} low-degree nodes hidden for readability`;
    container.appendChild(note);
  }

  const table = document.createElement("table");
  table.className = "contributions";
  const head = table.createTHead().insertRow();
  for (const text of ["node in " + compare.a, "node in " + compare.b, "contribution"]) {
    const th = document.createElement("th");
    th.textContent = text;
    head.appendChild(th);
  }
  const body = table.createTBody();
  let total = 0;
  for (const pair of compare.pairs) {
    total += pair.contribution;
    const row = body.insertRow();
    row.insertCell().textContent = pair.a_node;
    row.insertCell().textContent = pair.b_node;
    const value = row.insertCell();
    value.textContent = String(pair.contribution);
    value.className = "number";
  }
  const foot = table.createTFoot().insertRow();
  foot.className = total === compare.raw ? "sum-exact" : "sum-mismatch";
  const label = document.createElement("th");
  label.colSpan = 2;
  label.textContent = total === compare.raw ? "sum (= raw)" : "sum (!= raw)";
  foot.appendChild(label);
  const sumCell = document.createElement("td");
  sumCell.textContent = String(total);
  sumCell.className = "number";
  foot.appendChild(sumCell);
  container.appendChild(table);
}

/** Render an API failure inline without discarding the previous view. */
export function renderDrilldownError(container: HTMLElement, message: string): void {
  const banner = document.createElement("div");
  banner.className = "drilldown-error";
  banner.textContent = message;
  container.prepend(banner);
}
