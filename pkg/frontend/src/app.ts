/** Application shell: seed picker, steering controls, heatmap, drill-down.
 *
 * All state lives in a HuntSession; every displayed number originates from
 * an API response. Control changes are clamped to API ranges, mirrored into
 * a shareable URL, and turned into debounced latest-wins hunt requests.
 * Threshold-only changes re-render instantly from the cached report (the
 * follow-up request then confirms with `scores=hit`).
 */

import { ApiClient, ApiError, type HuntRequest } from "./api.js";
import { renderDrilldown, renderDrilldownError } from "./drilldown.js";
import { renderHeatmap } from "./heatmap.js";
import {
  alertSet,
  clampParameters,
  decodeSession,
  encodeSession,
  HuntSession,
  needsRescore,
  type HuntParameters,
} from "./session.js";
import { debounce, LatestWins } from "./steer.js";

const HUNT_DEBOUNCE_MS = 150;

interface Controls {
  seeds: HTMLSelectElement;
  threshold: HTMLInputElement;
  thresholdNumber: HTMLInputElement;
  w1: HTMLInputElement;
  w2: HTMLInputElement;
  w3: HTMLInputElement;
  jT: HTMLInputElement;
  status: HTMLElement;
}

function numberInput(value: number, step: string, min: string, max?: string): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "number";
  input.step = step;
  input.min = min;
  if (max !== undefined) input.max = max;
  input.value = String(value);
  return input;
}

function labeled(text: string, input: HTMLElement): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "control";
  const caption = document.createElement("span");
  caption.textContent = text;
  wrap.appendChild(caption);
  wrap.appendChild(input);
  return wrap;
}

function buildSkeleton(root: HTMLElement, session: HuntSession): Controls {
  root.textContent = "";
  root.className = "hunt-ui";

  const controls = document.createElement("div");
  controls.className = "controls";

  const seeds = document.createElement("select");
  seeds.multiple = true;
  seeds.size = 8;

  const threshold = document.createElement("input");
  threshold.type = "range";
  threshold.min = "0";
  threshold.max = "1";
  threshold.step = "0.01";
  threshold.value = String(session.parameters.threshold);
  const thresholdNumber = numberInput(session.parameters.threshold, "0.01", "0", "1");

  const w1 = numberInput(session.parameters.w1, "0.1", "0");
  const w2 = numberInput(session.parameters.w2, "0.1", "0");
  const w3 = numberInput(session.parameters.w3, "0.1", "0");
  const jT = numberInput(session.parameters.jT, "0.01", "0.01", "1");

  const status = document.createElement("div");
  status.className = "status";

  controls.appendChild(labeled("seed graphs", seeds));
  const thresholdWrap = document.createElement("div");
  thresholdWrap.className = "control";
  const thresholdCaption = document.createElement("span");
  thresholdCaption.textContent = "alert threshold";
  thresholdWrap.append(thresholdCaption, threshold, thresholdNumber);
  controls.appendChild(thresholdWrap);
  controls.appendChild(labeled("w1 (full match)", w1));
  controls.appendChild(labeled("w2 (edge mismatch)", w2));
  controls.appendChild(labeled("w3 (node mismatch)", w3));
  controls.appendChild(labeled("bucket threshold j_t", jT));
  controls.appendChild(status);

  const heatmap = document.createElement("div");
  heatmap.id = "heatmap";
  const drilldown = document.createElement("div");
  drilldown.id = "drilldown";

  const main = document.createElement("div");
  main.className = "main";
  main.append(heatmap, drilldown);
  root.append(controls, main);

  return { seeds, threshold, thresholdNumber, w1, w2, w3, jT, status };
}

export async function mountApp(root: HTMLElement, api: ApiClient): Promise<void> {
  const session = new HuntSession();
  const restored = decodeSession(window.location.search);
  session.seeds = restored.seeds;
  session.parameters = restored.parameters;

  const controls = buildSkeleton(root, session);
  const heatmapEl = root.querySelector<HTMLElement>("#heatmap")!;
  const drilldownEl = root.querySelector<HTMLElement>("#drilldown")!;
  const inflight = new LatestWins();

  const setStatus = (text: string, isError = false): void => {
    controls.status.textContent = text;
    controls.status.classList.toggle("error", isError);
  };

  const syncUrl = (): void => {
    const query = encodeSession(session.seeds, session.parameters);
    window.history.replaceState(null, "", `${window.location.pathname}?${query}`);
  };

  const renderFromSession = (): void => {
    const alerts = session.report
      ? alertSet(session.report, session.parameters.threshold)
      : new Set<string>();
    renderHeatmap(
      heatmapEl,
      session.report,
      alerts,
      { onSelectPair: (a, b) => void openDrilldown(a, b) },
      { threshold: session.parameters.threshold },
    );
  };

  const syncControls = (): void => {
    // round-trip invariant: controls show what the API echoed back
    const p = session.report
      ? {
          threshold: session.report.params.threshold,
          w1: session.report.params.weights[0],
          w2: session.report.params.weights[1],
          w3: session.report.params.weights[2],
          jT: session.report.params.j_t,
        }
      : session.parameters;
    controls.threshold.value = String(p.threshold);
    controls.thresholdNumber.value = String(p.threshold);
    controls.w1.value = String(p.w1);
    controls.w2.value = String(p.w2);
    controls.w3.value = String(p.w3);
    controls.jT.value = String(p.jT);
  };

  const runHunt = async (): Promise<void> => {
    if (session.seeds.length === 0) {
      session.report = null;
      renderFromSession();
      setStatus("select at least one seed graph");
      return;
    }
    const p = session.parameters;
    const request: HuntRequest = {
      seeds: session.seeds,
      threshold: p.threshold,
      weights: [p.w1, p.w2, p.w3],
      j_t: p.jT,
    };
    setStatus("hunting…");
    try {
      const outcome = await inflight.run((signal) => api.hunt(request, signal));
      if (outcome === null) return; // superseded by a newer request
      session.report = outcome.report;
      session.cache = outcome.cache;
      renderFromSession();
      syncControls();
      setStatus(
        `${outcome.report.alerts.length} alerts · cache: ` +
          `buckets=${outcome.cache.buckets ?? "?"} scores=${outcome.cache.scores ?? "?"}`,
      );
    } catch (error) {
      // keep the previous report on screen; surface the failure
      const message = error instanceof ApiError ? error.message : String(error);
      setStatus(`hunt failed: ${message}`, true);
    }
  };
  const scheduledHunt = debounce(() => void runHunt(), HUNT_DEBOUNCE_MS);

  const applyParameters = (next: HuntParameters, seedsChanged: boolean): void => {
    const clamped = clampParameters(next);
    const rescore = needsRescore(session.parameters, clamped, seedsChanged);
    session.parameters = clamped;
    syncUrl();
    if (!rescore && session.report) {
      renderFromSession(); // instant: threshold applies to cached API scores
    }
    scheduledHunt.call();
  };

  const openDrilldown = async (a: string, b: string): Promise<void> => {
    session.selectedPair = { a, b };
    const p = session.parameters;
    try {
      const [compare, graphA, graphB] = await Promise.all([
        api.compare(a, b, { w1: p.w1, w2: p.w2, w3: p.w3, j_t: p.jT }),
        api.graph(a),
        api.graph(b),
      ]);
      renderDrilldown(drilldownEl, compare, graphA, graphB);
    } catch (error) {
      const message = error instanceof ApiError ? error.message : String(error);
      renderDrilldownError(drilldownEl, `compare failed: ${message}`);
    }
  };

  const readParameters = (): HuntParameters => ({
    threshold: Number(controls.thresholdNumber.value),
    w1: Number(controls.w1.value),
    w2: Number(controls.w2.value),
    w3: Number(controls.w3.value),
    jT: Number(controls.jT.value),
  });

  controls.threshold.addEventListener("input", () => {
    controls.thresholdNumber.value = controls.threshold.value;
    applyParameters({ ...readParameters(), threshold: Number(controls.threshold.value) }, false);
  });
  for (const input of [controls.thresholdNumber, controls.w1, controls.w2, controls.w3, controls.jT]) {
    input.addEventListener("input", () => {
      controls.threshold.value = controls.thresholdNumber.value;
      applyParameters(readParameters(), false);
    });
  }
  controls.seeds.addEventListener("change", () => {
    session.seeds = [...controls.seeds.selectedOptions].map((o) => o.value);
    applyParameters(session.parameters, true);
  });

  // boot: populate the seed picker, restore selection, hunt if ready
  try {
    const listing = await api.graphs();
    for (const graph of listing.graphs) {
      const option = document.createElement("option");
      option.value = graph.graph_id;
      option.textContent = `${graph.graph_id} (${graph.host_id})`;
      option.selected = session.seeds.includes(graph.graph_id);
      controls.seeds.appendChild(option);
    }
    setStatus(`${listing.graphs.length} graphs in corpus`);
  } catch (error) {
    const message = error instanceof ApiError ? error.message : String(error);
    setStatus(`cannot load corpus: ${message}`, true);
  }
  renderFromSession();
  if (session.seeds.length > 0) void runHunt();
}

function defaultBase(): string {
  const query = new URLSearchParams(window.location.search);
  const override = query.get("api");
  if (override) return override.replace(/\/+$/, "");
  const host = window.location.hostname || "127.0.0.1";
  return `http://${host}:8787`;
}

const autoRoot = typeof document !== "undefined" ? document.getElementById("hunt-app") : null;
if (autoRoot) {
  void mountApp(autoRoot, new ApiClient(defaultBase()));
}
