/** Typed client for the crosshunt HTTP JSON API.
 *
 * Every number the UI displays comes from these responses; the client never
 * computes a score itself. The `X-Crosshunt-Cache` response header reports
 * what the server reused (`buckets=hit|miss scores=hit|miss`) and is parsed
 * here so the steering loop can tell cheap re-queries from full recomputes.
 */

export interface GraphSummary {
  graph_id: string;
  host_id: string;
  node_count: number;
  edge_count: number;
}

export interface GraphListing {
  graphs: GraphSummary[];
}

export interface GraphNode {
  id: string;
  kind: "subject" | "object";
  label: string;
}

export interface GraphEdge {
  src: string;
  dst: string;
  syscall_label: string;
  suspiciousness_label: string;
  seq: number;
}

export interface GraphDetail {
  graph_id: string;
  host_id: string;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface PairScore {
  a: string;
  b: string;
  raw: number;
  clamped: number;
}

export interface AlertRow {
  graph_id: string;
  host_id: string;
  score: number;
}

export interface HuntParams {
  seeds: string[];
  threshold: number;
  weights: [number, number, number];
  j_t: number;
  signature_length: number;
  seed: number;
}

export interface HuntReport {
  params: HuntParams;
  pairs: PairScore[];
  alerts: AlertRow[];
  correlated_hosts: string[];
}

export interface PairContribution {
  a_node: string;
  b_node: string;
  contribution: number;
}

export interface CompareResult {
  a: string;
  b: string;
  raw: number;
  clamped: number;
  mps_size: number;
  pairs: PairContribution[];
}

export interface HuntRequest {
  seeds: string[];
  threshold?: number;
  weights?: [number, number, number];
  j_t?: number;
  signature_length?: number;
  seed?: number;
}

export interface CompareParams {
  w1?: number;
  w2?: number;
  w3?: number;
  j_t?: number;
}

export type CacheState = "hit" | "miss" | null;

export interface CacheNote {
  buckets: CacheState;
  scores: CacheState;
}

/** An API-level failure: HTTP status plus the server's error message. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Parse `buckets=hit scores=miss` (any subset, any order). */
export function parseCacheNote(header: string | null): CacheNote {
  const note: CacheNote = { buckets: null, scores: null };
  if (!header) return note;
  for (const field of header.trim().split(/\s+/)) {
    const [key, value] = field.split("=");
    if ((key === "buckets" || key === "scores") && (value === "hit" || value === "miss")) {
      note[key] = value;
    }
  }
  return note;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    readonly base: string,
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let message = `HTTP ${response.status}`;
      try {
        const body = (await response.json()) as { error?: string };
        if (body && typeof body.error === "string") message = body.error;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, message);
    }
    return response;
  }

  async graphs(): Promise<GraphListing> {
    const response = await this.request("/graphs");
    return (await response.json()) as GraphListing;
  }

  async graph(graphId: string): Promise<GraphDetail> {
    const response = await this.request(`/graphs/${encodeURIComponent(graphId)}`);
    return (await response.json()) as GraphDetail;
  }

  async compare(a: string, b: string, params?: CompareParams): Promise<CompareResult> {
    const query = new URLSearchParams({ a, b });
    for (const [key, value] of Object.entries(params ?? {})) {
      if (value !== undefined) query.set(key, String(value));
    }
    const response = await this.request(`/compare?${query.toString()}`);
    return (await response.json()) as CompareResult;
  }

  async hunt(
    request: HuntRequest,
    signal?: AbortSignal,
  ): Promise<{ report: HuntReport; cache: CacheNote }> {
    const response = await this.request("/hunt", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
      signal,
    });
    const cache = parseCacheNote(response.headers.get("X-Crosshunt-Cache"));
    const report = (await response.json()) as HuntReport;
    return { report, cache };
  }
}
