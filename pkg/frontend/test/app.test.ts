// @vitest-environment jsdom
import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api.js";
import { mountApp } from "../src/app.js";

interface ServerState {
  huntBodies: Array<Record<string, unknown>>;
  failNextHunt: string | null;
  failCompare: string | null;
}

function newState(): ServerState {
  return { huntBodies: [], failNextHunt: null, failCompare: null };
}

function jsonResponse(
  body: unknown,
  options?: { status?: number; headers?: Record<string, string> },
): Response {
  const status = options?.status ?? 200;
  const headers = new Map(
    Object.entries(options?.headers ?? {}).map(([key, value]) => [key.toLowerCase(), value]),
  );
  return {
    ok: status >= 200 && status < 300,
    status,
    headers: { get: (name: string) => headers.get(name.toLowerCase()) ?? null },
    json: () => Promise.resolve(body),
  } as unknown as Response;
}

const HOSTS: Record<string, string> = { "seed-01": "wks-01", "atk-01": "wks-02", "ben-01": "wks-03" };
const PAIRS = [
  { a: "atk-01", b: "seed-01", raw: 0.8, clamped: 0.8 },
  { a: "ben-01", b: "seed-01", raw: 0.3, clamped: 0.3 },
];

function makeFetch(state: ServerState): (url: string, init?: RequestInit) => Promise<Response> {
  return (url, init) => {
    const parsed = new URL(url);
    if (parsed.pathname === "/graphs") {
      return Promise.resolve(
        jsonResponse({
          graphs: Object.entries(HOSTS).map(([graph_id, host_id]) => ({
            graph_id,
            host_id,
            node_count: 2,
            edge_count: 1,
          })),
        }),
      );
    }
    if (parsed.pathname.startsWith("/graphs/")) {
      const id = decodeURIComponent(parsed.pathname.slice("/graphs/".length));
      return Promise.resolve(
        jsonResponse({
          graph_id: id,
          host_id: HOSTS[id] ?? "wks-99",
          nodes: [
            { id: "p0", kind: "subject", label: "proc" },
            { id: "f0", kind: "object", label: "file" },
          ],
          edges: [
            { src: "p0", dst: "f0", syscall_label: "read", suspiciousness_label: "Benign", seq: 1 },
          ],
        }),
      );
    }
    if (parsed.pathname === "/compare") {
      if (state.failCompare) {
        return Promise.resolve(jsonResponse({ error: state.failCompare }, { status: 404 }));
      }
      return Promise.resolve(
        jsonResponse({
          a: parsed.searchParams.get("a"),
          b: parsed.searchParams.get("b"),
          raw: 0.75,
          clamped: 0.75,
          mps_size: 2,
          pairs: [
            { a_node: "seed-01:p0", b_node: "atk-01:p0", contribution: 0.5 },
            { a_node: "seed-01:f0", b_node: "atk-01:f0", contribution: 0.25 },
          ],
        }),
      );
    }
    if (parsed.pathname === "/hunt") {
      if (state.failNextHunt) {
        const message = state.failNextHunt;
        state.failNextHunt = null;
        return Promise.resolve(jsonResponse({ error: message }, { status: 409 }));
      }
      const body = JSON.parse(String(init?.body)) as Record<string, unknown>;
      state.huntBodies.push(body);
      const threshold = (body.threshold as number | undefined) ?? 0.5;
      const alerts = PAIRS.filter((p) => p.clamped >= threshold).map((p) => ({
        graph_id: p.a,
        host_id: HOSTS[p.a],
        score: p.clamped,
      }));
      const cache =
        state.huntBodies.length === 1 ? "buckets=miss scores=miss" : "buckets=hit scores=hit";
      return Promise.resolve(
        jsonResponse(
          {
            params: {
              seeds: body.seeds,
              threshold,
              weights: (body.weights as number[] | undefined) ?? [1, 0.2, 0.8],
              j_t: (body.j_t as number | undefined) ?? 0.6,
              signature_length: 128,
              seed: 42,
            },
            pairs: PAIRS,
            alerts,
            correlated_hosts: alerts.map((a) => a.host_id),
          },
          { headers: { "X-Crosshunt-Cache": cache } },
        ),
      );
    }
    return Promise.resolve(jsonResponse({ error: "unknown route" }, { status: 404 }));
  };
}

async function flushMicrotasks(): Promise<void> {
  for (let i = 0; i < 20; i++) await Promise.resolve();
}

async function mount(state = newState()): Promise<{ root: HTMLElement; state: ServerState }> {
  const root = document.createElement("div");
  document.body.appendChild(root);
  await mountApp(root, new ApiClient("http://svc", makeFetch(state)));
  return { root, state };
}

function selectSeed(root: HTMLElement, value: string): void {
  const select = root.querySelector("select")!;
  for (const option of select.options) {
    if (option.value === value) option.selected = true;
  }
  select.dispatchEvent(new Event("change"));
}

function setInput(input: HTMLInputElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new Event("input"));
}

/** number inputs in DOM order: threshold, w1, w2, w3, jT */
function numberInputs(root: HTMLElement): HTMLInputElement[] {
  return [...root.querySelectorAll<HTMLInputElement>('input[type="number"]')];
}

async function mountAndHunt(): Promise<{ root: HTMLElement; state: ServerState }> {
  const mounted = await mount();
  selectSeed(mounted.root, "seed-01");
  await vi.advanceTimersByTimeAsync(151);
  return mounted;
}

describe("mountApp", () => {
  beforeEach(() => {
    vi.useFakeTimers();
  });
  afterEach(() => {
    vi.useRealTimers();
    window.history.replaceState(null, "", "/");
    document.body.innerHTML = "";
  });

  it("populates the seed picker from the corpus listing", async () => {
    const { root } = await mount();
    const options = [...root.querySelectorAll("option")];
    expect(options.map((o) => o.value)).toEqual(["seed-01", "atk-01", "ben-01"]);
    expect(options[0].textContent).toBe("seed-01 (wks-01)");
    expect(root.querySelector(".status")?.textContent).toBe("3 graphs in corpus");
    expect(root.querySelector(".heatmap-empty")?.textContent).toContain("Pick one or more");
  });

  it("debounces a hunt after seed selection and renders the heatmap", async () => {
    const { root, state } = await mount();
    selectSeed(root, "seed-01");
    expect(state.huntBodies).toHaveLength(0); // still inside the debounce window
    await vi.advanceTimersByTimeAsync(151);
    expect(state.huntBodies).toHaveLength(1);
    expect(state.huntBodies[0].seeds).toEqual(["seed-01"]);
    expect(root.querySelector(".heatmap-caption")?.textContent).toBe(
      "1 alert at threshold 0.5 across 2 candidates",
    );
    expect(root.querySelector("th.alert")?.textContent).toBe("atk-01");
    expect(root.querySelector(".status")?.textContent).toContain(
      "cache: buckets=miss scores=miss",
    );
    expect(window.location.search).toContain("seeds=seed-01");
  });

  it("re-renders threshold changes instantly from cached scores", async () => {
    const { root, state } = await mountAndHunt();
    const [threshold] = numberInputs(root);
    setInput(threshold, "0.9");
    // instant: derived from the cached report, no new request yet
    expect(state.huntBodies).toHaveLength(1);
    expect(root.querySelector(".heatmap-caption")?.textContent).toBe(
      "0 alerts at threshold 0.9 across 2 candidates",
    );
    expect(root.querySelectorAll("th.alert")).toHaveLength(0);
    // the confirming request reports a score-cache hit
    await vi.advanceTimersByTimeAsync(151);
    expect(state.huntBodies).toHaveLength(2);
    expect(state.huntBodies[1].threshold).toBe(0.9);
    expect(root.querySelector(".status")?.textContent).toContain("scores=hit");
    expect(root.querySelector<HTMLInputElement>('input[type="range"]')?.value).toBe("0.9");
  });

  it("waits for the recompute when weights change", async () => {
    const { root, state } = await mountAndHunt();
    const [, w1] = numberInputs(root);
    setInput(w1, "2");
    // no instant re-render: the cached scores are stale under new weights
    expect(root.querySelector(".heatmap-caption")?.textContent).toBe(
      "1 alert at threshold 0.5 across 2 candidates",
    );
    await vi.advanceTimersByTimeAsync(151);
    expect(state.huntBodies).toHaveLength(2);
    expect(state.huntBodies[1].weights).toEqual([2, 0.2, 0.8]);
  });

  it("keeps the previous view and reports hunt failures in the status line", async () => {
    const { root, state } = await mountAndHunt();
    state.failNextHunt = "empty corpus";
    const [, , w2] = numberInputs(root);
    setInput(w2, "0.5");
    await vi.advanceTimersByTimeAsync(151);
    const status = root.querySelector(".status")!;
    expect(status.textContent).toBe("hunt failed: empty corpus");
    expect(status.classList.contains("error")).toBe(true);
    expect(root.querySelector("table.heatmap")).not.toBeNull(); // previous report retained
  });

  it("opens the drill-down when a cell is clicked", async () => {
    const { root } = await mountAndHunt();
    root.querySelector<HTMLElement>('td[data-a="seed-01"][data-b="atk-01"]')!.click();
    await flushMicrotasks();
    expect(root.querySelector(".drilldown-header")?.textContent).toContain("seed-01 vs atk-01");
    expect(root.querySelector("table.contributions tfoot tr")?.classList.contains("sum-exact")).toBe(
      true,
    );
  });

  it("renders drill-down failures inline", async () => {
    const { root, state } = await mountAndHunt();
    state.failCompare = "unknown graph: atk-01";
    root.querySelector<HTMLElement>('td[data-a="seed-01"][data-b="atk-01"]')!.click();
    await flushMicrotasks();
    expect(root.querySelector(".drilldown-error")?.textContent).toBe(
      "compare failed: unknown graph: atk-01",
    );
  });

  it("restores seeds and parameters from the URL and hunts immediately", async () => {
    window.history.replaceState(null, "", "/?seeds=seed-01&t=0.7&w1=1&w2=0.2&w3=0.8&jt=0.6");
    const { root, state } = await mount();
    await flushMicrotasks();
    expect(state.huntBodies).toHaveLength(1);
    expect(state.huntBodies[0].threshold).toBe(0.7);
    const select = root.querySelector("select")!;
    expect([...select.selectedOptions].map((o) => o.value)).toEqual(["seed-01"]);
    expect(numberInputs(root)[0].value).toBe("0.7");
    expect(root.querySelector(".heatmap-caption")?.textContent).toBe(
      "1 alert at threshold 0.7 across 2 candidates",
    );
  });
});
